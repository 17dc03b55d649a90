#include "harvest/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "harvest/errors.hpp"

namespace harvest {

namespace {

using cd = std::complex<double>;

constexpr int kBits8[8] = {0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111};
constexpr double kStructureTolerance = 1e-12;
constexpr double kTraceNormTolerance = 1e-10;
constexpr double kLambdaMax = 0.1;

int parties_of(int dim) {
  if (dim == 8) return 3;
  if (dim == 4) return 2;
  throw DomainError("density matrices have dimension 4 or 8");
}

// O(lambda^2) part of the three-detector state, vacuum entry included.
ComplexMatrix correlation_block3(const CorrelatorSet& cs) {
  if (cs.detectors != 3) throw DomainError("three-detector state needs a three-detector correlator set");
  ComplexMatrix d = ComplexMatrix::Zero(8, 8);
  d(0, 0) = -(cs.P[0] + cs.P[1] + cs.P[2]);
  d(1, 1) = cs.P[2];
  d(2, 2) = cs.P[1];
  d(3, 3) = cs.P[0];
  const cd c_ab = cs.c(0, 1), c_ac = cs.c(0, 2), c_bc = cs.c(1, 2);
  d(2, 1) = c_bc;
  d(1, 2) = std::conj(c_bc);
  d(3, 1) = c_ac;
  d(1, 3) = std::conj(c_ac);
  d(3, 2) = c_ab;
  d(2, 3) = std::conj(c_ab);
  const cd x_ab = cs.x(0, 1), x_ac = cs.x(0, 2), x_bc = cs.x(1, 2);
  d(4, 0) = x_bc;
  d(0, 4) = std::conj(x_bc);
  d(5, 0) = x_ac;
  d(0, 5) = std::conj(x_ac);
  d(6, 0) = x_ab;
  d(0, 6) = std::conj(x_ab);
  return d;
}

ComplexMatrix correlation_block2(const CorrelatorSet& cs, int j, int k) {
  if (!(j < k) || k >= cs.detectors || j < 0) throw DomainError("two-detector state needs j < k");
  const double pj = cs.P[static_cast<std::size_t>(j)];
  const double pk = cs.P[static_cast<std::size_t>(k)];
  ComplexMatrix d = ComplexMatrix::Zero(4, 4);
  d(0, 0) = -(pj + pk);
  d(1, 1) = pk;
  d(2, 2) = pj;
  d(2, 1) = cs.c(j, k);
  d(1, 2) = std::conj(d(2, 1));
  d(3, 0) = cs.x(j, k);
  d(0, 3) = std::conj(d(3, 0));
  return d;
}

ComplexMatrix with_vacuum(const ComplexMatrix& block, double lambda_tilde) {
  if (!(lambda_tilde > 0.0 && lambda_tilde <= kLambdaMax)) {
    throw DomainError("coupling lambda_tilde must lie in (0, 0.1]");
  }
  ComplexMatrix m = lambda_tilde * lambda_tilde * block;
  m(0, 0) += 1.0;
  return m;
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConvergenceError("Hermitian eigensolver failed");
  return solver.eigenvalues();
}

double negative_sum(const Eigen::VectorXd& ev, double threshold) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -threshold) s -= ev(i);
  }
  return s;
}

// lambda -> 0 limit of N / lambda^2: negative spectrum of the partially transposed
// O(lambda^2) block restricted to the non-vacuum states.
double leading_order_negativity(const ComplexMatrix& block, int subsystem) {
  const ComplexMatrix pt = partial_transpose(block, subsystem);
  const Eigen::Index n = pt.rows() - 1;
  const ComplexMatrix inner = pt.bottomRightCorner(n, n);
  const double scale = std::max(1.0, block.cwiseAbs().maxCoeff());
  return negative_sum(hermitian_eigenvalues(inner), 1e-14 * scale);
}

double eigen_negativity(const ComplexMatrix& block, int subsystem, const EigenCouplings& c) {
  const double h1 = c.first * c.first;
  const double h2 = c.second * c.second;
  const double v1 = negativity(DensityMatrix(with_vacuum(block, c.first)), subsystem) / h1;
  const double v2 = negativity(DensityMatrix(with_vacuum(block, c.second)), subsystem) / h2;
  // Below this the eigenvalue threshold dominates both evaluations.
  const double floor = 10.0 * kEigenZeroThreshold / std::min(h1, h2);
  if (std::max(v1, v2) > floor && std::abs(v1 - v2) > 1e-3 * std::max(v1, v2)) {
    throw ConsistencyError("negativity is not perturbative: N/lambda^2 = " + std::to_string(v1) + " vs " +
                           std::to_string(v2));
  }
  return std::max(0.0, (h2 * v1 - h1 * v2) / (h2 - h1));
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

bool close(cd a, cd b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw DomainError("density matrix must be square");
  parties_of(static_cast<int>(m_.rows()));
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kStructureTolerance) {
    throw DomainError("density matrix must be Hermitian");
  }
  if (std::abs(m_.trace() - cd(1.0, 0.0)) > kStructureTolerance) {
    throw DomainError("density matrix must have unit trace");
  }
}

int basis_bits(int dim, int index) {
  parties_of(dim);
  if (index < 0 || index >= dim) throw DomainError("basis index out of range");
  return dim == 8 ? kBits8[index] : index;
}

int basis_index(int dim, int bits) {
  parties_of(dim);
  if (bits < 0 || bits >= dim) throw DomainError("basis bits out of range");
  if (dim == 4) return bits;
  for (int i = 0; i < 8; ++i) {
    if (kBits8[i] == bits) return i;
  }
  throw DomainError("basis bits out of range");
}

DensityMatrix assemble_rho3(const CorrelatorSet& cs, double lambda_tilde) {
  return DensityMatrix(with_vacuum(correlation_block3(cs), lambda_tilde));
}

DensityMatrix assemble_rho2(const CorrelatorSet& cs, int j, int k, double lambda_tilde) {
  return DensityMatrix(with_vacuum(correlation_block2(cs, j, k), lambda_tilde));
}

DensityMatrix reduce(const DensityMatrix& rho3, int drop) {
  if (rho3.dim() != 8) throw DomainError("reduce expects a three-detector state");
  if (drop < 0 || drop > 2) throw DomainError("reduce: detector index out of range");
  int keep[2];
  for (int p = 0, n = 0; p < 3; ++p) {
    if (p != drop) keep[n++] = p;
  }
  auto lift = [&](int bits2, int dropped_bit) {
    int bits3 = 0;
    bits3 |= ((bits2 >> 1) & 1) << (2 - keep[0]);
    bits3 |= (bits2 & 1) << (2 - keep[1]);
    bits3 |= dropped_bit << (2 - drop);
    return basis_index(8, bits3);
  };
  ComplexMatrix out = ComplexMatrix::Zero(4, 4);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      for (int b = 0; b < 2; ++b) out(r, c) += rho3(lift(r, b), lift(c, b));
    }
  }
  return DensityMatrix(out);
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, int subsystem) {
  const int dim = static_cast<int>(m.rows());
  const int parties = parties_of(dim);
  if (subsystem < 0 || subsystem >= parties) throw DomainError("partial_transpose: invalid subsystem");
  const int mask = 1 << (parties - 1 - subsystem);
  ComplexMatrix out(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const int br = basis_bits(dim, r);
      const int bc = basis_bits(dim, c);
      const int nr = (br & ~mask) | (bc & mask);
      const int nc = (bc & ~mask) | (br & mask);
      out(basis_index(dim, nr), basis_index(dim, nc)) = m(r, c);
    }
  }
  return out;
}

double trace_norm_negativity(const DensityMatrix& rho, int subsystem) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(partial_transpose(rho.matrix(), subsystem));
  return 0.5 * (ev.cwiseAbs().sum() - 1.0);
}

double negativity(const DensityMatrix& rho, int subsystem) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(partial_transpose(rho.matrix(), subsystem));
  const double n = negative_sum(ev, kEigenZeroThreshold);
  const double tn = 0.5 * (ev.cwiseAbs().sum() - rho.matrix().trace().real());
  if (std::abs(n - tn) > kTraceNormTolerance) {
    throw ConsistencyError("negativity: eigenvalue sum and trace norm disagree");
  }
  return n;
}

std::string to_string(NegativityMode mode) {
  switch (mode) {
    case NegativityMode::leading_order: return "leading_order";
    case NegativityMode::eigen: return "eigen";
    case NegativityMode::closed_form: return "closed_form";
  }
  return "?";
}

double bipartite_closed_form(double p_j, double p_k, std::complex<double> x) {
  const double half = 0.5 * (p_j - p_k);
  return std::max(0.0, std::sqrt(half * half + std::norm(x)) - 0.5 * (p_j + p_k));
}

double equilateral_one_vs_rest(double p, double c, std::complex<double> x) {
  return std::max(0.0, 0.5 * std::sqrt(c * c + 8.0 * std::norm(x)) - 0.5 * c - p);
}

double equilateral_bipartite(double p, std::complex<double> x) { return std::max(0.0, std::abs(x) - p); }

double equilateral_pi(double p, double c, std::complex<double> x) {
  const double n3 = equilateral_one_vs_rest(p, c, x);
  const double n2 = equilateral_bipartite(p, x);
  return n3 * n3 - 2.0 * n2 * n2;
}

bool is_equilateral(const CorrelatorSet& cs, double rel) {
  if (cs.detectors != 3) return false;
  for (int i = 1; i < 3; ++i) {
    if (!close(cs.P[0], cs.P[static_cast<std::size_t>(i)], rel)) return false;
    if (!close(cs.C[0], cs.C[static_cast<std::size_t>(i)], rel)) return false;
    if (!close(cs.X[0], cs.X[static_cast<std::size_t>(i)], rel)) return false;
  }
  return true;
}

double negativity_perturbative(const CorrelatorSet& cs, const Bipartition& part, NegativityMode mode,
                               const EigenCouplings& couplings) {
  const int t = part.target;
  if (t < 0 || t >= cs.detectors) throw DomainError("negativity: target out of range");
  if (part.partner) {
    const int k = *part.partner;
    if (k < 0 || k >= cs.detectors || k == t) throw DomainError("negativity: invalid partner");
    if (mode == NegativityMode::closed_form) {
      return bipartite_closed_form(cs.P[static_cast<std::size_t>(t)], cs.P[static_cast<std::size_t>(k)],
                                   cs.x(t, k));
    }
    const ComplexMatrix block = correlation_block2(cs, std::min(t, k), std::max(t, k));
    const int sub = t < k ? 0 : 1;
    return mode == NegativityMode::leading_order ? leading_order_negativity(block, sub)
                                                 : eigen_negativity(block, sub, couplings);
  }
  if (cs.detectors != 3) throw DomainError("one-vs-rest negativity needs three detectors");
  if (mode == NegativityMode::closed_form) {
    if (!is_equilateral(cs)) throw DomainError("one-vs-rest closed form holds for equilateral sets only");
    return equilateral_one_vs_rest(cs.P[0], cs.C[0], cs.X[0]);
  }
  const ComplexMatrix block = correlation_block3(cs);
  return mode == NegativityMode::leading_order ? leading_order_negativity(block, t)
                                               : eigen_negativity(block, t, couplings);
}

EntanglementReport pi_tangle(const CorrelatorSet& cs, NegativityMode mode, const EigenCouplings& couplings) {
  if (cs.detectors != 3) throw DomainError("pi-tangle needs three detectors");
  EntanglementReport rep{};
  rep.method = to_string(mode);
  for (int j = 0; j < 3; ++j) {
    rep.one_vs_rest[static_cast<std::size_t>(j)] = negativity_perturbative(cs, {j, std::nullopt}, mode, couplings);
    for (int k = 0; k < 3; ++k) {
      if (k != j) {
        rep.bipartite[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
            negativity_perturbative(cs, {j, k}, mode, couplings);
      }
    }
  }
  const double sym_rel = mode == NegativityMode::eigen ? 1e-6 : 1e-9;
  const double sym_abs = mode == NegativityMode::eigen ? 1e-9 : 1e-14;
  for (const auto& [j, k] : kPairs) {
    const double njk = rep.bipartite[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
    const double nkj = rep.bipartite[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    if (std::abs(njk - nkj) > sym_rel * std::max(njk, nkj) + sym_abs) {
      throw ConsistencyError("N_j(k) and N_k(j) differ at leading order");
    }
  }
  double total = 0.0;
  for (int j = 0; j < 3; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    double pj = rep.one_vs_rest[uj] * rep.one_vs_rest[uj];
    for (int k = 0; k < 3; ++k) {
      if (k != j) pj -= rep.bipartite[uj][static_cast<std::size_t>(k)] * rep.bipartite[uj][static_cast<std::size_t>(k)];
    }
    rep.pi_components[uj] = pj;
    total += pj;
  }
  rep.pi = total / 3.0;

  if (mode != NegativityMode::closed_form && is_equilateral(cs)) {
    const double closed = equilateral_pi(cs.P[0], cs.C[0], cs.X[0]);
    const double scale = std::max(rep.one_vs_rest[0], std::abs(cs.X[0]));
    const double floor = mode == NegativityMode::eigen ? 1e-5 * scale : 1e-14;
    if (std::abs(rep.pi - closed) > 1e-6 * std::abs(closed) + floor) {
      throw ConsistencyError("equilateral pi-tangle disagrees with its closed form: " + std::to_string(rep.pi) +
                             " vs " + std::to_string(closed));
    }
  }
  return rep;
}

EntanglementReport pi_tangle(const DensityMatrix& rho3) {
  if (rho3.dim() != 8) throw DomainError("pi-tangle needs a three-detector state");
  EntanglementReport rep{};
  rep.method = "eigen";
  for (int j = 0; j < 3; ++j) rep.one_vs_rest[static_cast<std::size_t>(j)] = negativity(rho3, j);
  for (int drop = 0; drop < 3; ++drop) {
    const DensityMatrix r = reduce(rho3, drop);
    int kept[2];
    for (int p = 0, n = 0; p < 3; ++p) {
      if (p != drop) kept[n++] = p;
    }
    const auto a = static_cast<std::size_t>(kept[0]);
    const auto b = static_cast<std::size_t>(kept[1]);
    rep.bipartite[a][b] = negativity(r, 0);
    rep.bipartite[b][a] = negativity(r, 1);
  }
  double total = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    double pj = rep.one_vs_rest[j] * rep.one_vs_rest[j];
    for (std::size_t k = 0; k < 3; ++k) {
      if (k != j) pj -= rep.bipartite[j][k] * rep.bipartite[j][k];
    }
    rep.pi_components[j] = pj;
    total += pj;
  }
  rep.pi = total / 3.0;
  return rep;
}

std::array<bool, 3> ckw_check(const EntanglementReport& report) {
  std::array<bool, 3> out{};
  for (std::size_t j = 0; j < 3; ++j) {
    double lhs = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      if (k != j) lhs += report.bipartite[j][k] * report.bipartite[j][k];
    }
    out[j] = lhs <= report.one_vs_rest[j] * report.one_vs_rest[j];
  }
  return out;
}

}  // namespace harvest
