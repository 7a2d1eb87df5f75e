#include "qbmsym/discrete.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "qbmsym/errors.hpp"

namespace qbmsym {

namespace {

std::uint64_t encode_label(const PauliLabel& g) {
  return g.alpha_word() | (g.beta_word() << g.size());
}

std::string encode_state(const std::vector<PauliLabel>& images) {
  std::string key;
  key.reserve(images.size() * sizeof(std::uint64_t));
  for (const auto& g : images) {
    const std::uint64_t code = encode_label(g);
    key.append(reinterpret_cast<const char*>(&code), sizeof(code));
  }
  return key;
}

PauliLabel apply_images(const std::vector<PauliLabel>& images, const GeneratorSet& gen,
                        const PauliLabel& label) {
  const auto mask = gen.decompose(label);
  if (!mask) {
    throw input_error("label " + label.str() + " lies outside the generator span");
  }
  PauliLabel out = PauliLabel::zero(label.size());
  for (std::size_t k = 0; k < images.size(); ++k) {
    if ((*mask >> k) & 1) out = out ^ images[k];
  }
  return out;
}

std::vector<PauliLabel> induced_images(const std::vector<PauliLabel>& images,
                                       const GeneratorSet& gen) {
  std::vector<PauliLabel> induced;
  induced.reserve(gen.labels.size());
  for (std::size_t i = 0; i < gen.labels.size(); ++i) {
    PauliLabel out = PauliLabel::zero(gen.labels[i].size());
    for (int k = 0; k < gen.num_generators(); ++k) {
      if ((gen.decompositions[i] >> k) & 1) out = out ^ images[k];
    }
    induced.push_back(out);
  }
  return induced;
}

// Solves images_of_m(x_k) = generators[k] for the inverse generator images.
std::optional<std::vector<PauliLabel>> invert_images(const std::vector<PauliLabel>& images,
                                                     const GeneratorSet& gen) {
  if (images.empty()) return std::vector<PauliLabel>{};
  GeneratorSet image_basis;
  try {
    image_basis = find_generator(images);
  } catch (const input_error&) {
    return std::nullopt;
  }
  if (image_basis.num_generators() != static_cast<int>(images.size())) return std::nullopt;
  std::vector<PauliLabel> inverse_images;
  for (const auto& g : gen.generators) {
    const auto mask = image_basis.decompose(g);
    if (!mask) return std::nullopt;
    // mask indexes into `images` because they are all independent.
    PauliLabel pre = PauliLabel::zero(g.size());
    for (std::size_t k = 0; k < images.size(); ++k) {
      if ((*mask >> k) & 1) pre = pre ^ gen.generators[k];
    }
    inverse_images.push_back(pre);
  }
  return inverse_images;
}

}  // namespace

PauliLabel CliffordMap::apply(const PauliLabel& label, const GeneratorSet& gen) const {
  if (const int i = gen.label_index(label); i >= 0) return induced[i];
  return apply_images(generator_images, gen, label);
}

bool CliffordMap::is_identity(const GeneratorSet& gen) const {
  return generator_images == gen.generators;
}

const CliffordMap* DiscreteGroupReport::find(
    const std::vector<PauliLabel>& generator_images) const {
  for (const auto& e : elements) {
    if (e.generator_images == generator_images) return &e;
  }
  return nullptr;
}

CliffordMap compose(const CliffordMap& a, const CliffordMap& b, const GeneratorSet& gen) {
  if (a.generator_images.size() != b.generator_images.size()) {
    throw input_error("compose: mismatched generator sets");
  }
  CliffordMap out;
  out.generator_images.reserve(b.generator_images.size());
  for (const auto& image : b.generator_images) {
    out.generator_images.push_back(apply_images(a.generator_images, gen, image));
  }
  out.induced = induced_images(out.generator_images, gen);
  return out;
}

std::optional<CliffordMap> inverse(const CliffordMap& m, const GeneratorSet& gen) {
  const auto inv = invert_images(m.generator_images, gen);
  if (!inv) return std::nullopt;
  CliffordMap out;
  out.generator_images = *inv;
  out.induced = induced_images(out.generator_images, gen);
  return out;
}

std::vector<std::vector<PauliLabel>> continuous_label_actions(
    const ContinuousGenerators& continuous, const GeneratorSet& gen, std::size_t cap) {
  // exp(i pi/4 sigma_g) conjugates sigma_h to sigma_h when they commute and to
  // (a sign times) sigma_{g^h} otherwise; that is a linear label action. The
  // closure of these quarter turns is every label-permutation the continuous
  // subgroup contains, for commuting generator sets.
  std::vector<std::vector<PauliLabel>> closure;
  std::unordered_set<std::string> seen;
  std::deque<std::vector<PauliLabel>> queue;

  queue.push_back(gen.generators);  // identity action
  seen.insert(encode_state(gen.generators));
  while (!queue.empty()) {
    auto state = queue.front();
    queue.pop_front();
    closure.push_back(state);
    if (closure.size() > cap) {
      throw resource_error("continuous label-action closure exceeded its cap");
    }
    for (const auto& g : continuous.labels) {
      std::vector<PauliLabel> next;
      next.reserve(state.size());
      for (const auto& image : state) {
        next.push_back(commutes(g, image) ? image : (g ^ image));
      }
      if (seen.insert(encode_state(next)).second) queue.push_back(std::move(next));
    }
  }
  return closure;
}

DiscreteGroupReport enumerate_discrete(const std::vector<PauliLabel>& terms,
                                       const GeneratorSet& gen, const CommGraph& graph,
                                       const ContinuousGenerators& continuous,
                                       std::size_t order_cap) {
  DiscreteGroupReport report;
  report.gen = gen;

  std::unordered_set<PauliLabel, LabelHash> term_set(terms.begin(), terms.end());
  const auto image_lists = generator_images(graph, gen);
  if (image_lists.size() > order_cap) {
    throw resource_error("discrete group order " + std::to_string(image_lists.size()) +
                         " exceeds the cap of " + std::to_string(order_cap));
  }

  const int n_sub = terms.empty() ? 0 : terms.front().size();
  for (const auto& vertex_indices : image_lists) {
    CliffordMap m;
    m.generator_images.reserve(vertex_indices.size());
    for (const int v : vertex_indices) m.generator_images.push_back(graph.vertices[v]);
    m.induced = induced_images(m.generator_images, gen);
    // Generation-rule re-check: every induced image stays inside the term set.
    bool closed = true;
    for (const auto& image : m.induced) closed = closed && term_set.contains(image);
    if (!closed) continue;
    m.name = classify_map_name(m.generator_images, gen, n_sub);
    report.elements.push_back(std::move(m));
  }

  // Group axioms at label level.
  const auto find_index = [&](const std::vector<PauliLabel>& images) {
    for (std::size_t i = 0; i < report.elements.size(); ++i) {
      if (report.elements[i].generator_images == images) return static_cast<int>(i);
    }
    return -1;
  };
  bool has_identity = false;
  for (const auto& e : report.elements) has_identity = has_identity || e.is_identity(gen);
  if (!has_identity) throw input_error("discrete enumeration lost the identity element");
  for (const auto& a : report.elements) {
    const auto inv = inverse(a, gen);
    if (!inv || find_index(inv->generator_images) < 0) {
      throw input_error("discrete enumeration is not closed under inversion");
    }
    for (const auto& b : report.elements) {
      if (find_index(compose(a, b, gen).generator_images) < 0) {
        throw input_error("discrete enumeration is not closed under composition");
      }
    }
  }

  // Absorption flags and classes modulo the continuous subgroup.
  const auto cont_actions = continuous_label_actions(continuous, gen);
  std::unordered_set<std::string> cont_set;
  for (const auto& action : cont_actions) cont_set.insert(encode_state(action));
  std::vector<int> class_reps;
  for (auto& e : report.elements) {
    e.absorbed_by_continuous =
        !e.is_identity(gen) && cont_set.contains(encode_state(e.generator_images));
    int assigned = -1;
    for (std::size_t c = 0; c < class_reps.size(); ++c) {
      const auto& rep = report.elements[class_reps[c]];
      const auto rep_inv = inverse(rep, gen);
      const auto quotient = compose(e, *rep_inv, gen);
      if (cont_set.contains(encode_state(quotient.generator_images))) {
        assigned = static_cast<int>(c);
        break;
      }
    }
    if (assigned < 0) {
      assigned = static_cast<int>(class_reps.size());
      class_reps.push_back(static_cast<int>(&e - report.elements.data()));
    }
    e.class_id = assigned;
  }
  report.classes_mod_continuous = static_cast<int>(class_reps.size());

  std::ostringstream note;
  note << "every element carries a free Pauli factor: full discrete subgroup = listed elements x P(1.."
       << n_sub << ")";
  report.factor_note = note.str();
  return report;
}

// ---------------------------------------------------------------------------
// Unitary realization by breadth-first gate-word search.

namespace {

struct Gate {
  std::string name;
  // Tableau action on a label (mod sign).
  PauliLabel (*apply)(const PauliLabel&, int, int);
  int a, b;  // qubit operands (b unused for one-qubit gates)
};

PauliLabel apply_h(const PauliLabel& g, int q, int) {
  const std::uint64_t bit = 1ull << q;
  std::uint64_t alpha = g.alpha_word(), beta = g.beta_word();
  const bool xa = alpha & bit, xb = beta & bit;
  alpha = (alpha & ~bit) | (xb ? bit : 0);
  beta = (beta & ~bit) | (xa ? bit : 0);
  return PauliLabel(g.size(), alpha, beta);
}

PauliLabel apply_s(const PauliLabel& g, int q, int) {
  const std::uint64_t bit = 1ull << q;
  std::uint64_t beta = g.beta_word();
  if (g.alpha_word() & bit) beta ^= bit;
  return PauliLabel(g.size(), g.alpha_word(), beta);
}

PauliLabel apply_swap(const PauliLabel& g, int i, int j) {
  auto swap_bits = [&](std::uint64_t w) {
    const bool bi = (w >> i) & 1, bj = (w >> j) & 1;
    w &= ~((1ull << i) | (1ull << j));
    if (bi) w |= 1ull << j;
    if (bj) w |= 1ull << i;
    return w;
  };
  return PauliLabel(g.size(), swap_bits(g.alpha_word()), swap_bits(g.beta_word()));
}

PauliLabel apply_cx(const PauliLabel& g, int control, int target) {
  std::uint64_t alpha = g.alpha_word(), beta = g.beta_word();
  if ((alpha >> control) & 1) alpha ^= 1ull << target;
  if ((beta >> target) & 1) beta ^= 1ull << control;
  return PauliLabel(g.size(), alpha, beta);
}

std::vector<Gate> gate_set(int n) {
  std::vector<Gate> gates;
  for (int i = 0; i < n; ++i) gates.push_back({"H(" + std::to_string(i + 1) + ")", apply_h, i, 0});
  for (int i = 0; i < n; ++i) gates.push_back({"S(" + std::to_string(i + 1) + ")", apply_s, i, 0});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      gates.push_back(
          {"SWAP(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")", apply_swap, i, j});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        gates.push_back(
            {"CX(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")", apply_cx, i, j});
  return gates;
}

Eigen::MatrixXcd embed_one_qubit(const Eigen::Matrix2cd& u, int q, int n) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int k = 0; k < n; ++k) {
    const Eigen::MatrixXcd factor =
        (k == q) ? Eigen::MatrixXcd(u) : Eigen::MatrixXcd(Eigen::Matrix2cd::Identity());
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c)
        next.block(2 * r, 2 * c, 2, 2) = out(r, c) * factor;
    out = std::move(next);
  }
  return out;
}

// Basis permutation built from the bit action; covers SWAP and CX exactly.
Eigen::MatrixXcd bit_permutation_matrix(int n, const std::function<std::size_t(std::size_t)>& f) {
  const std::size_t dim = 1ull << n;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) out(f(col), col) = 1.0;
  return out;
}

Eigen::MatrixXcd gate_matrix(const Gate& gate, int n) {
  // Qubit q is the leftmost tensor factor for q=0, so basis index bit for
  // qubit q is (n-1-q).
  const auto bit_of = [&](int q) { return n - 1 - q; };
  if (gate.name[0] == 'H') {
    Eigen::Matrix2cd h;
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    return embed_one_qubit(h, gate.a, n);
  }
  if (gate.name[0] == 'S' && gate.name[1] == '(') {
    Eigen::Matrix2cd s;
    s << 1, 0, 0, std::complex<double>(0, 1);
    return embed_one_qubit(s, gate.a, n);
  }
  if (gate.name.rfind("SWAP", 0) == 0) {
    const int bi = bit_of(gate.a), bj = bit_of(gate.b);
    return bit_permutation_matrix(n, [=](std::size_t idx) {
      const bool x = (idx >> bi) & 1, y = (idx >> bj) & 1;
      idx &= ~((1ull << bi) | (1ull << bj));
      if (x) idx |= 1ull << bj;
      if (y) idx |= 1ull << bi;
      return idx;
    });
  }
  // CX(control, target)
  const int bc = bit_of(gate.a), bt = bit_of(gate.b);
  return bit_permutation_matrix(n, [=](std::size_t idx) {
    if ((idx >> bc) & 1) idx ^= 1ull << bt;
    return idx;
  });
}

}  // namespace

UnitaryRealization realize_unitary(const CliffordMap& m, const GeneratorSet& gen, int num_qubits,
                                   std::size_t state_cap) {
  UnitaryRealization result;
  const auto gates = gate_set(num_qubits);
  const auto start = gen.generators;
  const auto target = m.generator_images;

  std::vector<std::vector<PauliLabel>> states{start};
  std::vector<std::pair<int, int>> parent{{-1, -1}};  // (state index, gate index)
  std::unordered_map<std::string, int> seen{{encode_state(start), 0}};
  int found_index = start == target ? 0 : -1;

  for (std::size_t head = 0; head < states.size() && found_index < 0; ++head) {
    for (std::size_t gi = 0; gi < gates.size(); ++gi) {
      std::vector<PauliLabel> next;
      next.reserve(states[head].size());
      for (const auto& img : states[head]) next.push_back(gates[gi].apply(img, gates[gi].a, gates[gi].b));
      const auto key = encode_state(next);
      if (seen.contains(key)) continue;
      seen.emplace(key, static_cast<int>(states.size()));
      states.push_back(std::move(next));
      parent.emplace_back(static_cast<int>(head), static_cast<int>(gi));
      if (states.back() == target) {
        found_index = static_cast<int>(states.size()) - 1;
        break;
      }
      if (states.size() > state_cap) {
        result.note = "gate-word search exceeded its state cap";
        return result;
      }
    }
  }
  if (found_index < 0) {
    result.note = "no gate word realizes the map within the searched group";
    return result;
  }

  std::vector<int> word;  // gate indices, first applied first
  for (int at = found_index; parent[at].first >= 0; at = parent[at].first) {
    word.push_back(parent[at].second);
  }
  std::reverse(word.begin(), word.end());

  const std::size_t dim = 1ull << num_qubits;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const int gi : word) u = gate_matrix(gates[gi], num_qubits) * u;

  // Conjugation check: U sigma_g U^dagger must equal +/- sigma_{m(g)}.
  for (std::size_t k = 0; k < gen.generators.size(); ++k) {
    const Eigen::MatrixXcd lhs = u * to_dense(gen.generators[k]) * u.adjoint();
    const Eigen::MatrixXcd rhs = to_dense(m.generator_images[k]);
    const double plus = (lhs - rhs).cwiseAbs().maxCoeff();
    const double minus = (lhs + rhs).cwiseAbs().maxCoeff();
    if (std::min(plus, minus) > 1e-9) {
      result.note = "conjugation check failed for generator " + gen.generators[k].str();
      return result;
    }
  }

  result.found = true;
  result.matrix = std::move(u);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    result.gate_word.push_back(gates[*it].name);  // leftmost acts last
  }
  if (result.gate_word.empty()) result.gate_word.push_back("I");
  return result;
}

// ---------------------------------------------------------------------------
// Naming.

namespace {

PauliLabel permute_label(const PauliLabel& g, const std::vector<int>& perm) {
  std::uint64_t alpha = 0, beta = 0;
  for (int q = 0; q < g.size(); ++q) {
    if (g.alpha_bit(q)) alpha |= 1ull << perm[q];
    if (g.beta_bit(q)) beta |= 1ull << perm[q];
  }
  return PauliLabel(g.size(), alpha, beta);
}

PauliLabel exchange_label(const PauliLabel& g, std::uint64_t subset) {
  // X <-> Z on the chosen qubits.
  const std::uint64_t keep = ~subset;
  const std::uint64_t alpha = (g.alpha_word() & keep) | (g.beta_word() & subset);
  const std::uint64_t beta = (g.beta_word() & keep) | (g.alpha_word() & subset);
  return PauliLabel(g.size(), alpha, beta);
}

std::string perm_name(const std::vector<int>& perm) {
  int moved = 0, a = -1, b = -1;
  for (std::size_t q = 0; q < perm.size(); ++q) {
    if (perm[q] != static_cast<int>(q)) {
      ++moved;
      if (a < 0) a = static_cast<int>(q);
      else b = static_cast<int>(q);
    }
  }
  if (moved == 0) return "identity";
  if (moved == 2) return "swap(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")";
  std::string s = "perm(";
  for (std::size_t q = 0; q < perm.size(); ++q) {
    if (q) s += ",";
    s += std::to_string(perm[q] + 1);
  }
  return s + ")";
}

std::string exchange_name(std::uint64_t subset, int n) {
  std::string s;
  for (int q = 0; q < n; ++q) {
    if ((subset >> q) & 1) s += (s.empty() ? "" : "*") + std::string("H(") + std::to_string(q + 1) + ")";
  }
  return s;
}

}  // namespace

std::string classify_map_name(const std::vector<PauliLabel>& generator_images,
                              const GeneratorSet& gen, int num_qubits) {
  if (generator_images == gen.generators) return "identity";
  if (num_qubits <= 8) {
    std::vector<int> perm(num_qubits);
    for (int q = 0; q < num_qubits; ++q) perm[q] = q;
    // Qubit permutations, then permutations composed with X<->Z exchanges.
    do {
      bool match = true;
      for (std::size_t k = 0; k < generator_images.size() && match; ++k) {
        match = permute_label(gen.generators[k], perm) == generator_images[k];
      }
      if (match) return perm_name(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    for (int q = 0; q < num_qubits; ++q) perm[q] = q;
    do {
      for (std::uint64_t subset = 1; subset < (1ull << num_qubits); ++subset) {
        bool match = true;
        for (std::size_t k = 0; k < generator_images.size() && match; ++k) {
          match = permute_label(exchange_label(gen.generators[k], subset), perm) ==
                  generator_images[k];
        }
        if (match) {
          const std::string p = perm_name(perm);
          const std::string h = exchange_name(subset, num_qubits);
          return p == "identity" ? h : p + "*" + h;
        }
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  if (num_qubits <= 3) {
    CliffordMap m;
    m.generator_images = generator_images;
    m.induced = induced_images(generator_images, gen);
    const auto realization = realize_unitary(m, gen, num_qubits, 200000);
    if (realization.found) {
      std::string word;
      for (const auto& g : realization.gate_word) {
        if (!word.empty()) word += "*";
        word += g;
      }
      return word;
    }
  }

  std::ostringstream out;
  out << "map{";
  for (std::size_t k = 0; k < generator_images.size(); ++k) {
    if (k) out << ",";
    out << gen.generators[k].str() << "->" << generator_images[k].str();
  }
  out << "}";
  return out.str();
}

}  // namespace qbmsym
