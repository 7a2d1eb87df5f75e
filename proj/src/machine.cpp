#include "qbmsym/machine.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "qbmsym/errors.hpp"

namespace qbmsym {

namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw input_error("machine document line " + std::to_string(line) + ": " + what);
}

}  // namespace

MachineSpec parse_spec(std::string_view document) {
  MachineSpec spec;
  std::optional<int> visible, hidden;
  std::unordered_set<PauliLabel, LabelHash> seen;

  std::istringstream stream{std::string(document)};
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (const auto eq = line.find('='); eq != std::string::npos) {
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key == "name") {
        spec.name = value;
      } else if (key == "visible" || key == "hidden") {
        int parsed = 0;
        try {
          std::size_t used = 0;
          parsed = std::stoi(value, &used);
          if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
          parse_fail(line_no, "expected an integer for '" + key + "', got '" + value + "'");
        }
        if (parsed < 0) parse_fail(line_no, "'" + key + "' must be nonnegative");
        (key == "visible" ? visible : hidden) = parsed;
      } else {
        parse_fail(line_no, "unknown header key '" + key + "'");
      }
      continue;
    }

    if (!visible || !hidden) {
      parse_fail(line_no, "term '" + line + "' before 'visible' and 'hidden' headers");
    }
    const int n = *visible + *hidden;
    if (static_cast<int>(line.size()) != n) {
      parse_fail(line_no, "term '" + line + "' has length " + std::to_string(line.size()) +
                              ", expected " + std::to_string(n));
    }
    PauliLabel label;
    try {
      label = PauliLabel::from_string(line);
    } catch (const input_error& e) {
      parse_fail(line_no, e.what());
    }
    if (label.is_zero()) parse_fail(line_no, "identity term '" + line + "' is not allowed");
    if (!seen.insert(label).second) parse_fail(line_no, "duplicate term '" + line + "'");
    spec.terms.push_back(label);
  }

  if (!visible || !hidden) throw input_error("machine document: missing 'visible'/'hidden' headers");
  if (*visible < 1) throw input_error("machine document: at least one visible qubit is required");
  if (spec.terms.empty()) throw input_error("machine document: no terms given");
  spec.num_visible = *visible;
  spec.num_hidden = *hidden;
  spec.num_qubits = *visible + *hidden;
  if (spec.name.empty()) spec.name = "unnamed";
  return spec;
}

MachineSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open machine document: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_spec(buffer.str());
}

std::string spec_document(const MachineSpec& spec) {
  std::ostringstream out;
  out << "name = " << spec.name << "\n";
  out << "visible = " << spec.num_visible << "\n";
  out << "hidden = " << spec.num_hidden << "\n";
  for (const auto& t : spec.terms) out << t.str() << "\n";
  return out.str();
}

Partition partition(const MachineSpec& spec) {
  Partition result;
  const int nv = spec.num_visible, nh = spec.num_hidden;
  for (const auto& term : spec.terms) {
    const PauliLabel vis = term.slice(0, nv);
    const PauliLabel hid = term.slice(nv, nh);
    if (hid.is_zero() && !vis.is_zero()) {
      result.visible.push_back(vis);
    } else if (vis.is_zero() && !hid.is_zero()) {
      result.hidden.push_back(hid);
    } else {
      result.coupling.push_back(term);
    }
  }
  return result;
}

namespace {

// Row-echelon basis over F2 on the concatenated (alpha|beta) bit vector,
// tracking which generators combine into each reduced row.
struct F2Basis {
  struct Row {
    std::uint64_t alpha, beta;
    std::uint64_t mask;  // generator indices XORed into this row
  };
  std::vector<Row> rows;

  static int leading_bit(std::uint64_t alpha, std::uint64_t beta) {
    if (alpha) return std::countr_zero(alpha);
    if (beta) return 64 + std::countr_zero(beta);
    return -1;
  }

  // Reduces the label against the basis; returns {residual_is_zero, mask}.
  std::pair<bool, std::uint64_t> reduce(const PauliLabel& label) const {
    std::uint64_t a = label.alpha_word(), b = label.beta_word(), mask = 0;
    for (const auto& row : rows) {
      const int lead = leading_bit(row.alpha, row.beta);
      const bool hit = lead < 64 ? ((a >> lead) & 1) : ((b >> (lead - 64)) & 1);
      if (hit) {
        a ^= row.alpha;
        b ^= row.beta;
        mask ^= row.mask;
      }
    }
    return {a == 0 && b == 0, mask};
  }

  void insert(const PauliLabel& label, std::uint64_t mask) {
    std::uint64_t a = label.alpha_word(), b = label.beta_word();
    for (const auto& row : rows) {
      const int lead = leading_bit(row.alpha, row.beta);
      const bool hit = lead < 64 ? ((a >> lead) & 1) : ((b >> (lead - 64)) & 1);
      if (hit) {
        a ^= row.alpha;
        b ^= row.beta;
        mask ^= row.mask;
      }
    }
    rows.push_back({a, b, mask});
    std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
      return leading_bit(x.alpha, x.beta) < leading_bit(y.alpha, y.beta);
    });
  }
};

int chain_phase(const PauliLabel& gamma, const GeneratorSet& gen, std::uint64_t mask) {
  PhasedPauli product = PhasedPauli::identity(gamma.size());
  for (int k = 0; k < gen.num_generators(); ++k) {
    if ((mask >> k) & 1) product = multiply(product, {gen.generators[k], 0});
  }
  // product = i^q sigma_gamma, so sigma_gamma = i^{-q} * product.
  return (4 - product.phase_exp) % 4;
}

}  // namespace

PauliLabel GeneratorSet::xor_of_mask(std::uint64_t mask) const {
  PauliLabel acc = PauliLabel::zero(generators.empty() ? 0 : generators.front().size());
  for (int k = 0; k < num_generators(); ++k) {
    if ((mask >> k) & 1) acc = acc ^ generators[k];
  }
  return acc;
}

std::optional<std::uint64_t> GeneratorSet::decompose(const PauliLabel& label) const {
  if (!generators.empty() && label.size() != generators.front().size()) return std::nullopt;
  F2Basis basis;
  for (int k = 0; k < num_generators(); ++k) basis.insert(generators[k], 1ull << k);
  const auto [zero, mask] = basis.reduce(label);
  if (!zero) return std::nullopt;
  return mask;
}

int GeneratorSet::label_index(const PauliLabel& label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

GeneratorSet find_generator(const std::vector<PauliLabel>& labels) {
  if (labels.empty()) throw input_error("find_generator: empty label set");
  GeneratorSet gen;
  gen.labels = labels;
  F2Basis basis;
  for (const auto& label : labels) {
    const auto [reduces_to_zero, mask] = basis.reduce(label);
    if (reduces_to_zero) {
      gen.decompositions.push_back(mask);
    } else {
      const auto index = static_cast<std::uint64_t>(gen.generators.size());
      if (index >= 64) throw resource_error("find_generator: more than 64 generators");
      gen.generators.push_back(label);
      basis.insert(label, 1ull << index);
      gen.decompositions.push_back(1ull << index);
    }
  }
  gen.phase_exps.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    gen.phase_exps.push_back(chain_phase(labels[i], gen, gen.decompositions[i]));
  }
  return gen;
}

int decomposition_phase(const PauliLabel& gamma, const GeneratorSet& gen) {
  if (const int i = gen.label_index(gamma); i >= 0) return gen.phase_exps[i];
  const auto mask = gen.decompose(gamma);
  if (!mask) throw input_error("decomposition_phase: label " + gamma.str() +
                               " is not generated by the set");
  return chain_phase(gamma, gen, *mask);
}

}  // namespace qbmsym
