#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "qbmsym/discrete.hpp"
#include "qbmsym/errors.hpp"

using namespace qbmsym;

#ifndef QBMSYM_MACHINES_DIR
#define QBMSYM_MACHINES_DIR "machines"
#endif

namespace {

struct Analysis {
  MachineSpec spec;
  GeneratorSet gen;
  CommGraph graph;
  ContinuousGenerators cont;
  DiscreteGroupReport report;
};

Analysis analyze(const std::string& file) {
  Analysis a;
  a.spec = load_spec(std::string(QBMSYM_MACHINES_DIR) + "/" + file);
  a.gen = find_generator(a.spec.terms);
  a.graph = build_graph(a.spec.terms);
  a.cont = compute_continuous(a.spec.terms, a.spec.num_qubits);
  a.report = enumerate_discrete(a.spec.terms, a.gen, a.graph, a.cont);
  return a;
}

const CliffordMap& by_name(const DiscreteGroupReport& report, const std::string& name) {
  for (const auto& e : report.elements) {
    if (e.name == name) return e;
  }
  REQUIRE_MESSAGE(false, ("element not found: " + name).c_str());
  static CliffordMap dummy;
  return dummy;
}

}  // namespace

TEST_CASE("two-qubit fixture: identity and qubit swap") {
  const auto a = analyze("xz_zz_2q.qbm");
  REQUIRE(a.report.order() == 2);
  std::set<std::string> names;
  for (const auto& e : a.report.elements) names.insert(e.name);
  CHECK(names == std::set<std::string>{"identity", "swap(1,2)"});
  CHECK(a.report.factor_note.find("P(1..2)") != std::string::npos);

  const auto& swap = by_name(a.report, "swap(1,2)");
  CHECK(swap.induced[0] == PauliLabel::from_string("IX"));
  CHECK(swap.induced[4] == PauliLabel::from_string("ZZ"));
  for (const auto& e : a.report.elements) CHECK_FALSE(e.absorbed_by_continuous);
}

TEST_CASE("three-qubit fixture: the full qubit-permutation group") {
  const auto a = analyze("xz_zz_3q.qbm");
  CHECK(a.report.order() == 6);
  std::set<std::string> names;
  for (const auto& e : a.report.elements) names.insert(e.name);
  CHECK(names == std::set<std::string>{"identity", "swap(1,2)", "swap(1,3)", "swap(2,3)",
                                       "perm(2,3,1)", "perm(3,1,2)"});
  CHECK(a.report.classes_mod_continuous == 6);
}

TEST_CASE("zzxx-xz two-qubit fixture: order 8 with basis exchanges absorbed") {
  const auto a = analyze("zzxx_xz_2q.qbm");
  REQUIRE(a.report.order() == 8);
  std::set<std::string> names;
  for (const auto& e : a.report.elements) names.insert(e.name);
  CHECK(names == std::set<std::string>{"identity", "swap(1,2)", "H(1)", "H(2)", "H(1)*H(2)",
                                       "swap(1,2)*H(1)", "swap(1,2)*H(2)",
                                       "swap(1,2)*H(1)*H(2)"});
  // Basis exchanges lie inside the continuous subgroup generated by the
  // per-qubit Y rotations; swaps do not.
  CHECK(by_name(a.report, "H(1)").absorbed_by_continuous);
  CHECK(by_name(a.report, "H(2)").absorbed_by_continuous);
  CHECK(by_name(a.report, "H(1)*H(2)").absorbed_by_continuous);
  CHECK_FALSE(by_name(a.report, "swap(1,2)").absorbed_by_continuous);
  CHECK_FALSE(by_name(a.report, "swap(1,2)*H(1)").absorbed_by_continuous);
  // Modulo the continuous subgroup only identity and swap remain.
  CHECK(a.report.classes_mod_continuous == 2);
  CHECK(by_name(a.report, "identity").class_id == by_name(a.report, "H(1)").class_id);
  CHECK(by_name(a.report, "swap(1,2)").class_id ==
        by_name(a.report, "swap(1,2)*H(2)").class_id);
  CHECK(by_name(a.report, "identity").class_id != by_name(a.report, "swap(1,2)").class_id);
}

TEST_CASE("compose") {
  const auto a = analyze("xz_zz_2q.qbm");
  const auto& identity = by_name(a.report, "identity");
  const auto& swap = by_name(a.report, "swap(1,2)");
  CHECK(compose(identity, swap, a.gen).generator_images == swap.generator_images);
  CHECK(compose(swap, swap, a.gen).generator_images == identity.generator_images);

  const auto b = analyze("zzxx_xz_2q.qbm");
  // The 8 elements close into the expected multiplication structure.
  for (const auto& x : b.report.elements) {
    for (const auto& y : b.report.elements) {
      const auto xy = compose(x, y, b.gen);
      CHECK(b.report.find(xy.generator_images) != nullptr);
    }
  }
  const auto hh = compose(by_name(b.report, "H(1)"), by_name(b.report, "H(2)"), b.gen);
  CHECK(hh.generator_images == by_name(b.report, "H(1)*H(2)").generator_images);
  // swap * H(1) * swap = H(2).
  const auto conj = compose(by_name(b.report, "swap(1,2)"),
                            compose(by_name(b.report, "H(1)"), by_name(b.report, "swap(1,2)"),
                                    b.gen),
                            b.gen);
  CHECK(conj.generator_images == by_name(b.report, "H(2)").generator_images);

  CliffordMap wrong;
  wrong.generator_images = {PauliLabel::from_string("X")};
  CHECK_THROWS_AS(compose(wrong, identity, a.gen), input_error);
}

TEST_CASE("group axioms hold on every fixture report") {
  for (const auto* name : {"xz_zz_2q.qbm", "xz_zz_3q.qbm", "zzxx_xz_2q.qbm"}) {
    const auto a = analyze(name);
    bool has_identity = false;
    for (const auto& e : a.report.elements) has_identity |= e.is_identity(a.gen);
    CHECK(has_identity);
    for (const auto& e : a.report.elements) {
      const auto inv = inverse(e, a.gen);
      REQUIRE(inv.has_value());
      CHECK(a.report.find(inv->generator_images) != nullptr);
      CHECK(compose(e, *inv, a.gen).generator_images == a.gen.generators);
    }
  }
}

TEST_CASE("realize_unitary") {
  SUBCASE("identity map gives the identity matrix") {
    const auto a = analyze("xz_zz_2q.qbm");
    const auto r = realize_unitary(by_name(a.report, "identity"), a.gen, 2);
    REQUIRE(r.found);
    CHECK((r.matrix - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(r.gate_word == std::vector<std::string>{"I"});
  }
  SUBCASE("qubit swap realizes as the swap gate") {
    const auto a = analyze("xz_zz_2q.qbm");
    const auto r = realize_unitary(by_name(a.report, "swap(1,2)"), a.gen, 2);
    REQUIRE(r.found);
    Eigen::MatrixXcd swap_gate = Eigen::MatrixXcd::Zero(4, 4);
    swap_gate(0, 0) = swap_gate(3, 3) = 1;
    swap_gate(1, 2) = swap_gate(2, 1) = 1;
    CHECK((r.matrix - swap_gate).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("one-qubit X<->Z exchange: signs are free") {
    const auto gen = find_generator({PauliLabel::from_string("X"), PauliLabel::from_string("Z")});
    CliffordMap m;
    m.generator_images = {PauliLabel::from_string("Z"), PauliLabel::from_string("X")};
    m.induced = m.generator_images;
    const auto r = realize_unitary(m, gen, 1);
    REQUIRE(r.found);
    const Eigen::MatrixXcd ux = r.matrix * to_dense(PauliLabel::from_string("X")) * r.matrix.adjoint();
    const Eigen::MatrixXcd z = to_dense(PauliLabel::from_string("Z"));
    CHECK(std::min((ux - z).cwiseAbs().maxCoeff(), (ux + z).cwiseAbs().maxCoeff()) < 1e-12);
  }
  SUBCASE("realized unitaries preserve the real term span") {
    for (const auto* name : {"xz_zz_2q.qbm", "zzxx_xz_2q.qbm", "xz_zz_3q.qbm"}) {
      const auto a = analyze(name);
      const int n = a.spec.num_qubits;
      const int dim = 1 << n;
      for (const auto& e : a.report.elements) {
        const auto r = realize_unitary(e, a.gen, n);
        REQUIRE(r.found);
        for (const auto& t : a.spec.terms) {
          const Eigen::MatrixXcd conj = r.matrix * to_dense(t) * r.matrix.adjoint();
          double residual = 0.0;
          for (const auto& basis : qbmsym::testing::all_labels(n)) {
            const std::complex<double> coeff = (to_dense(basis) * conj).trace() / double(dim);
            const bool in_span =
                std::find(a.spec.terms.begin(), a.spec.terms.end(), basis) != a.spec.terms.end();
            residual += in_span ? coeff.imag() * coeff.imag() : std::norm(coeff);
          }
          CHECK(std::sqrt(residual) <= 1e-10);
        }
      }
    }
  }
}
