#pragma once

// Brute-force reference for P, C and X: the defining double integrals over
// the two proper times, with the BTZ Wightman function evaluated as an image
// sum at finite UV regulator epsilon, then extrapolated to epsilon -> 0.
//
// Nothing here shares code with the single-integral fast path beyond the
// detector kinematics.

#include <complex>
#include <string>
#include <vector>

#include "harvest/correlators.hpp"
#include "harvest/execution.hpp"
#include "harvest/geometry.hpp"
#include "harvest/quadrature.hpp"

namespace harvest {

enum class ElementKind { P, C, X };

std::string to_string(ElementKind kind);

// W_BTZ between static points (t, r, phi) and (t', r', phi') at regulator epsilon,
// as a function of dt = t - t'.
class WightmanEvaluator {
 public:
  WightmanEvaluator(const BtzBackground& bg, double r, double r_prime, double delta_phi, double epsilon,
                    const ImageSumControls& image);

  std::complex<double> operator()(double dt) const;

  // Same with |dt|: the time-ordered combination entering X.
  std::complex<double> time_ordered(double dt) const { return (*this)(std::abs(dt)); }

  // Coordinate times where sigma or sigma + 2 vanishes at epsilon = 0, within |dt| <= dt_max.
  std::vector<double> light_cone_times(double dt_max) const;

  double epsilon() const noexcept { return epsilon_; }

 private:
  BtzBackground bg_;
  double a_;         // r r' / r_h^2
  double b_;         // sqrt((r^2 - r_h^2)(r'^2 - r_h^2)) / r_h^2
  double spatial_;   // a - 1 - b >= 0
  double delta_phi_;
  double epsilon_;
  ImageSumControls image_;
};

struct OracleControls {
  std::vector<double> epsilons{0.04, 0.02, 0.01};
  double window = 8.0;    // proper-time window [-window, window]
  int base_panels = 400;  // uniform outer panels before light-cone grading
  int inner_panels = 16;
  ImageSumControls image{1e-13, 0.0, 2, 100000};
  Execution exec = Execution::parallel;
};

void validate(const OracleControls& ctrl);

struct OracleReport {
  ElementKind kind = ElementKind::P;
  int j = 0;
  int k = 0;
  std::vector<double> epsilons;
  std::vector<std::complex<double>> raw;  // value at each epsilon
  std::vector<double> grid_error;         // |value - value on the halved grid| per epsilon
  std::vector<std::vector<std::complex<double>>> table;  // Neville table, row i uses epsilons[0..i]
  std::complex<double> value{};
  double error_estimate = 0.0;  // |last two extrapolation levels|
  bool monotone = true;
  long nodes = 0;
};

// Element (kind, j, k) per squared coupling. For P pass k = j.
OracleReport oracle_element(const DetectorConfiguration& cfg, ElementKind kind, int j, int k,
                            const OracleControls& ctrl = {});

// Raw double integral at one epsilon. `grid_error`, if given, receives the
// difference from the halved grid.
std::complex<double> oracle_value(const DetectorConfiguration& cfg, ElementKind kind, int j, int k,
                                  double epsilon, const OracleControls& ctrl, double* grid_error = nullptr,
                                  long* nodes = nullptr);

// Neville table of the polynomial extrapolation of v(h) to h = 0.
std::vector<std::vector<std::complex<double>>> neville_table(const std::vector<double>& h,
                                                             const std::vector<std::complex<double>>& v);

// The fast-path value of the same element (P and C are returned as real).
std::complex<double> fast_element(const DetectorConfiguration& cfg, ElementKind kind, int j, int k,
                                  const NumericsControls& ctrl = {});

// Fast-path versus oracle at one element, for both candidate branch signs.
struct BranchComparison {
  ElementKind kind = ElementKind::P;
  int j = 0;
  int k = 0;
  std::complex<double> oracle{};
  double oracle_error = 0.0;
  std::complex<double> fast_minus{};  // branch sign -1
  std::complex<double> fast_plus{};   // branch sign +1
  bool minus_agrees = false;
  bool plus_agrees = false;
};

// Agreement test used throughout: |fast - oracle| <= max(rel |oracle|, abs).
bool agrees(std::complex<double> fast, std::complex<double> oracle, double rel = 1e-3, double abs = 1e-6);

BranchComparison compare_branches(const DetectorConfiguration& cfg, ElementKind kind, int j, int k,
                                  const OracleControls& oracle_ctrl = {},
                                  const NumericsControls& numerics = {});

}  // namespace harvest
