#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qbmsym/errors.hpp"
#include "qbmsym/pauli.hpp"

using namespace qbmsym;
using qbmsym::testing::all_labels;
using qbmsym::testing::dense_oracle;
using qbmsym::testing::random_label;

TEST_CASE("nu basics") {
  const auto x = PauliLabel::from_string("X");
  const auto z = PauliLabel::from_string("Z");
  CHECK(nu(x, z) == 1);
  CHECK(nu(z, x) == -1);

  const auto zero2 = PauliLabel::zero(2);
  for (const auto& g : all_labels(2)) CHECK(nu(zero2, g) == 0);

  const auto g1 = PauliLabel::from_string("XI");
  const auto g5 = PauliLabel::from_string("ZZ");
  CHECK(nu(g1, g5) == 1);

  CHECK_THROWS_AS(nu(x, zero2), input_error);
}

TEST_CASE("omega basics") {
  const auto x = PauliLabel::from_string("X");
  const auto z = PauliLabel::from_string("Z");
  const auto y = PauliLabel::from_string("Y");
  CHECK(omega(x, z) == 0);
  CHECK(omega(y, y) == 4);  // kept as the raw integer, reduced mod 4 only in phases
  for (const auto& g : all_labels(1)) CHECK(omega(PauliLabel::zero(1), g) == 0);
  CHECK_THROWS_AS(omega(x, PauliLabel::zero(2)), input_error);

  // sigma_y * sigma_y realizes the identity through omega = 4.
  const auto yy = multiply({y, 0}, {y, 0});
  CHECK(yy.label.is_zero());
  CHECK(yy.phase_exp == 0);
}

TEST_CASE("nu antisymmetric, omega symmetric") {
  for (const auto& g : all_labels(2)) {
    for (const auto& h : all_labels(2)) {
      CHECK(nu(g, h) == -nu(h, g));
      CHECK(omega(g, h) == omega(h, g));
    }
  }
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const auto g = random_label(8, rng), h = random_label(8, rng);
    CHECK(nu(g, h) == -nu(h, g));
    CHECK(omega(g, h) == omega(h, g));
  }
}

TEST_CASE("multiply matches the dense oracle") {
  const auto xz = multiply({PauliLabel::from_string("X"), 0}, {PauliLabel::from_string("Z"), 0});
  CHECK(xz.label == PauliLabel::from_string("Y"));
  CHECK(xz.phase_exp == 3);  // X Z = -i Y

  SUBCASE("exhaustive, one qubit, all phase pairs") {
    for (const auto& g : all_labels(1))
      for (const auto& h : all_labels(1))
        for (int pg = 0; pg < 4; ++pg)
          for (int ph = 0; ph < 4; ++ph) {
            const PhasedPauli a{g, pg}, b{h, ph};
            const auto prod = multiply(a, b);
            const Eigen::MatrixXcd expect = dense_oracle(a) * dense_oracle(b);
            CHECK((dense_oracle(prod) - expect).cwiseAbs().maxCoeff() < 1e-12);
          }
  }
  SUBCASE("exhaustive labels, two qubits") {
    for (const auto& g : all_labels(2))
      for (const auto& h : all_labels(2)) {
        const PhasedPauli a{g, 0}, b{h, 0};
        const auto prod = multiply(a, b);
        const Eigen::MatrixXcd expect = dense_oracle(a) * dense_oracle(b);
        CHECK((dense_oracle(prod) - expect).cwiseAbs().maxCoeff() < 1e-12);
      }
  }
  SUBCASE("squares are the identity") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      const auto g = random_label(6, rng);
      const auto sq = multiply({g, 0}, {g, 0});
      CHECK(sq.label.is_zero());
      CHECK(sq.phase_exp == 0);
    }
  }
  SUBCASE("identity is neutral") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
      const PhasedPauli a{random_label(5, rng), 2};
      CHECK(multiply(PhasedPauli::identity(5), a) == a);
      CHECK(multiply(a, PhasedPauli::identity(5)) == a);
    }
  }
  SUBCASE("associativity") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
      const PhasedPauli a{random_label(4, rng), 1}, b{random_label(4, rng), 0},
          c{random_label(4, rng), 3};
      CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
    }
  }
}

TEST_CASE("commutes follows the nu parity and the dense swap rule") {
  const auto g1 = PauliLabel::from_string("XI");
  const auto g2 = PauliLabel::from_string("ZI");
  const auto g3 = PauliLabel::from_string("IX");
  CHECK_FALSE(commutes(g1, g2));
  CHECK(commutes(g1, g3));
  CHECK(commutes(g1, g1));

  for (const auto& g : all_labels(2)) {
    for (const auto& h : all_labels(2)) {
      const Eigen::MatrixXcd gh = dense_oracle({g, 0}) * dense_oracle({h, 0});
      const Eigen::MatrixXcd hg = dense_oracle({h, 0}) * dense_oracle({g, 0});
      const double sign = (nu(g, h) % 2 + 2) % 2 == 0 ? 1.0 : -1.0;
      CHECK((gh - sign * hg).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(commutes(g, h) == ((gh - hg).cwiseAbs().maxCoeff() < 1e-12));
    }
  }
}

TEST_CASE("to_dense") {
  CHECK((to_dense(PauliLabel::from_string("I")) - Eigen::MatrixXcd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  Eigen::MatrixXcd y(2, 2);
  y << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  CHECK((to_dense(PauliLabel::from_string("Y")) - y).cwiseAbs().maxCoeff() < 1e-15);

  // Qubit 1 is the leftmost factor.
  const auto zi = to_dense(PauliLabel::from_string("ZI"));
  CHECK(zi(0, 0) == std::complex<double>(1, 0));
  CHECK(zi(3, 3) == std::complex<double>(-1, 0));

  CHECK_THROWS_AS(to_dense(PauliLabel::zero(13)), resource_error);
  CHECK(to_dense(PauliLabel::zero(3), 3).rows() == 8);

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const PhasedPauli a{random_label(3, rng), static_cast<int>(rng() % 4)};
    const Eigen::MatrixXcd u = to_dense(a);
    CHECK((u * u.adjoint() - Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
    const bool hermitian = (u - u.adjoint()).cwiseAbs().maxCoeff() < 1e-12;
    CHECK(hermitian == (a.phase_exp % 2 == 0));
  }
}

TEST_CASE("xor group laws") {
  for (const auto& g : all_labels(2)) {
    CHECK((g ^ g).is_zero());
    CHECK((g ^ PauliLabel::zero(2)) == g);
    for (const auto& h : all_labels(2))
      for (const auto& k : all_labels(2)) CHECK(((g ^ h) ^ k) == (g ^ (h ^ k)));
  }
}

TEST_CASE("string round trips") {
  for (const std::string s : {"I", "XYZ", "ZZXI", "YIIX"}) {
    CHECK(PauliLabel::from_string(s).str() == s);
  }
  CHECK(PhasedPauli::from_string("-iZX").phase_exp == 3);
  CHECK(PhasedPauli::from_string("-iZX").str() == "-iZX");
  CHECK(PhasedPauli::from_string("+XY").phase_exp == 0);
  CHECK(PhasedPauli::from_string("XY").label == PauliLabel::from_string("XY"));
  CHECK(PhasedPauli::from_string("-Z").phase_exp == 2);
  CHECK_THROWS_AS(PauliLabel::from_string("XQ"), input_error);
}
