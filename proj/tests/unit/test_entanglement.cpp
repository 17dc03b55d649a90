#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "harvest/entanglement.hpp"
#include "harvest/errors.hpp"

using namespace harvest;
using cd = std::complex<double>;

namespace {

CorrelatorSet random_set(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0), s(-1.0, 1.0);
  CorrelatorSet cs;
  for (int i = 0; i < 3; ++i) cs.P[i] = 0.2 * u(rng);
  // admissible: |C_jk| <= sqrt(P_j P_k)
  for (int p = 0; p < 3; ++p) {
    const auto [j, k] = kPairs[p];
    cs.C[p] = s(rng) * std::sqrt(cs.P[j] * cs.P[k]);
    cs.X[p] = cd(0.3 * s(rng), 0.3 * s(rng));
  }
  return cs;
}

CorrelatorSet equilateral(double p, double c, cd x) {
  CorrelatorSet cs;
  cs.P.fill(p);
  cs.C.fill(c);
  cs.X.fill(x);
  return cs;
}

ComplexMatrix state(const Eigen::VectorXcd& psi) { return psi * psi.adjoint(); }

// Negativity straight from the definition at a tiny coupling, in the test's own code.
double brute_force(const CorrelatorSet& cs, int target, double lambda) {
  const double l2 = lambda * lambda;
  ComplexMatrix m = ComplexMatrix::Zero(8, 8);
  m(0, 0) = 1.0 - l2 * (cs.P[0] + cs.P[1] + cs.P[2]);
  m(3, 3) = l2 * cs.P[0];
  m(2, 2) = l2 * cs.P[1];
  m(1, 1) = l2 * cs.P[2];
  const int single[3] = {3, 2, 1};   // A, B, C excited
  const int pair_slot[3] = {6, 5, 4};  // AB, AC, BC excited
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int p = 0; p < 3; ++p) {
    const int j = pairs[p][0], k = pairs[p][1];
    m(single[j], single[k]) = l2 * cs.C[p];
    m(single[k], single[j]) = l2 * cs.C[p];
    m(pair_slot[p], 0) = l2 * cs.X[p];
    m(0, pair_slot[p]) = l2 * std::conj(cs.X[p]);
  }
  // occupation bits (A B C) of each basis index and back
  const int bits[8] = {0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111};
  int index[8];
  for (int i = 0; i < 8; ++i) index[bits[i]] = i;
  const int bit = 1 << (2 - target);
  ComplexMatrix t(8, 8);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      const int r2 = (bits[r] & ~bit) | (bits[c] & bit), c2 = (bits[c] & ~bit) | (bits[r] & bit);
      t(index[r2], index[c2]) = m(r, c);
    }
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(t);
  double neg = 0.0;
  for (int i = 0; i < 8; ++i) neg += std::min(0.0, es.eigenvalues()(i));
  return -neg / l2;
}

}  // namespace

TEST_CASE("basis ordering") {
  CHECK(basis_bits(8, 1) == 0b001);
  CHECK(basis_bits(8, 2) == 0b010);
  CHECK(basis_bits(8, 3) == 0b100);
  CHECK(basis_bits(8, 4) == 0b011);
  CHECK(basis_bits(8, 5) == 0b101);
  CHECK(basis_bits(8, 6) == 0b110);
  CHECK(basis_bits(8, 7) == 0b111);
  for (int i = 0; i < 8; ++i) CHECK(basis_index(8, basis_bits(8, i)) == i);
  for (int i = 0; i < 4; ++i) CHECK(basis_index(4, basis_bits(4, i)) == i);
}

TEST_CASE("assembled states") {
  CorrelatorSet zero;
  const auto vac = assemble_rho3(zero, 0.1);
  CHECK(vac(0, 0) == cd(1.0));
  CHECK(vac.matrix().cwiseAbs().sum() == doctest::Approx(1.0));

  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto cs = random_set(rng);
    const double l2 = 0.05 * 0.05;
    const auto rho = assemble_rho3(cs, 0.05);
    CHECK((rho.matrix() - rho.matrix().adjoint()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(rho.matrix().trace() - 1.0) < 1e-15);
    CHECK(rho(4, 0) == l2 * cs.X[2]);
    CHECK(rho(0, 4) == std::conj(l2 * cs.X[2]));
    const auto r = reduce(rho, 2);
    CHECK(std::abs(r(3, 0) - l2 * cs.X[0]) < 1e-17);
    CHECK(std::abs(r(2, 1) - l2 * cs.C[0]) < 1e-17);
    CHECK(std::abs(r.matrix().trace() - 1.0) < 1e-15);
  }
  CHECK_THROWS_AS(assemble_rho3(zero, 0.0), DomainError);
  CHECK_THROWS_AS(assemble_rho3(zero, 0.2), DomainError);
  CHECK(reduce(vac, 0)(0, 0) == cd(1.0));
}

TEST_CASE("density matrix validation") {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = 1.0;
  m(1, 0) = cd(0.0, 0.1);
  CHECK_THROWS_AS(DensityMatrix{m}, DomainError);
  ComplexMatrix t = ComplexMatrix::Zero(4, 4);
  t(0, 0) = 0.9;
  CHECK_THROWS_AS(DensityMatrix{t}, DomainError);
  CHECK_THROWS_AS(DensityMatrix{ComplexMatrix::Identity(3, 3) / 3.0}, DomainError);
}

TEST_CASE("partial transpose") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int dim : {4, 8}) {
    ComplexMatrix m(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) m(r, c) = cd(g(rng), g(rng));
    const int parties = dim == 8 ? 3 : 2;
    for (int s = 0; s < parties; ++s) {
      CHECK(partial_transpose(partial_transpose(m, s), s) == m);
      CHECK(std::abs(partial_transpose(m, s).trace() - m.trace()) < 1e-14);
      ComplexMatrix d = m.diagonal().asDiagonal();
      CHECK(partial_transpose(d, s) == d);
    }
  }
  Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(partial_transpose(state(bell), 0));
  CHECK(es.eigenvalues()(0) == doctest::Approx(-0.5));
  for (int i = 1; i < 4; ++i) CHECK(es.eigenvalues()(i) == doctest::Approx(0.5));
}

TEST_CASE("textbook negativities") {
  Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  CHECK(negativity(DensityMatrix(state(bell)), 0) == doctest::Approx(0.5));

  ComplexMatrix prod = ComplexMatrix::Zero(4, 4);
  prod(0, 0) = 0.3;
  prod(1, 1) = 0.7;
  CHECK(negativity(DensityMatrix(prod), 1) == 0.0);

  for (double p : {0.1, 1.0 / 3.0, 0.5, 0.9}) {
    ComplexMatrix w = p * state(bell) + (1.0 - p) * ComplexMatrix::Identity(4, 4) / 4.0;
    CHECK(negativity(DensityMatrix(w), 0) == doctest::Approx(std::max(0.0, (3.0 * p - 1.0) / 4.0)).epsilon(1e-12));
  }

  Eigen::VectorXcd ghz = Eigen::VectorXcd::Zero(8);
  ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
  const DensityMatrix g(state(ghz));
  for (int s = 0; s < 3; ++s) CHECK(negativity(g, s) == doctest::Approx(0.5));
  const auto rep = pi_tangle(g);
  CHECK(rep.pi == doctest::Approx(0.25));
  const auto ckw = ckw_check(rep);
  CHECK((ckw[0] && ckw[1] && ckw[2]));

  // W state: N_A(BC) = sqrt(2)/3, N_A(B) = (sqrt(5) - 1)/6
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(8);
  w(1) = w(2) = w(3) = 1.0 / std::sqrt(3.0);
  const auto wrep = pi_tangle(DensityMatrix(state(w)));
  CHECK(wrep.one_vs_rest[0] == doctest::Approx(std::sqrt(2.0) / 3.0));
  CHECK(wrep.bipartite[0][1] == doctest::Approx((std::sqrt(5.0) - 1.0) / 6.0));
  CHECK(wrep.pi == doctest::Approx((std::sqrt(5.0) - 1.0) / 9.0));
}

TEST_CASE("eigenvalue and trace-norm negativities agree") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const auto rho = assemble_rho3(random_set(rng), 0.1);
    for (int s = 0; s < 3; ++s) {
      CHECK(std::abs(negativity(rho, s) - trace_norm_negativity(rho, s)) < 1e-10);
    }
  }
}

TEST_CASE("leading-order negativity matches a brute-force small-coupling evaluation") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 40; ++i) {
    const auto cs = random_set(rng);
    for (int t = 0; t < 3; ++t) {
      const double lo = negativity_perturbative(cs, {t, std::nullopt});
      CHECK(lo == doctest::Approx(brute_force(cs, t, 1e-4)).epsilon(1e-5));
      for (int k = 0; k < 3; ++k) {
        if (k == t) continue;
        const double cf = negativity_perturbative(cs, {t, k}, NegativityMode::closed_form);
        CHECK(negativity_perturbative(cs, {t, k}) == doctest::Approx(cf).epsilon(1e-12));
        CHECK(negativity_perturbative(cs, {t, k}, NegativityMode::eigen) == doctest::Approx(cf).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("equilateral closed forms") {
  const cd x(0.03, -0.04);
  CHECK(equilateral_one_vs_rest(0.0, 0.0, x) == doctest::Approx(std::sqrt(2.0) * 0.05));
  CHECK(equilateral_bipartite(0.0, x) == doctest::Approx(0.05));
  CHECK(equilateral_bipartite(0.06, x) == 0.0);
  CHECK(equilateral_pi(0.0, 0.0, x) == doctest::Approx(0.0).epsilon(1e-15));

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 0.2), s(-0.2, 0.2), t(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double p = u(rng);
    const auto cs = equilateral(p, t(rng) * p, cd(s(rng), s(rng)));
    const auto lo = pi_tangle(cs);
    const auto cf = pi_tangle(cs, NegativityMode::closed_form);
    CHECK(lo.pi == doctest::Approx(cf.pi).epsilon(1e-9));
    CHECK(lo.one_vs_rest[1] == doctest::Approx(cf.one_vs_rest[1]).epsilon(1e-9));
  }
  CorrelatorSet zero;
  const auto z = pi_tangle(zero);
  CHECK(z.pi == 0.0);
  CHECK(z.one_vs_rest[0] == 0.0);
  CHECK_THROWS_AS(negativity_perturbative(random_set(rng), {0, std::nullopt}, NegativityMode::closed_form),
                  DomainError);
}

TEST_CASE("ckw diagnostic") {
  EntanglementReport rep{};
  auto ok = ckw_check(rep);
  CHECK((ok[0] && ok[1] && ok[2]));
  rep.bipartite[0][1] = 0.3;
  rep.one_vs_rest[0] = 0.1;
  ok = ckw_check(rep);
  CHECK_FALSE(ok[0]);
  CHECK(ok[1]);
}
