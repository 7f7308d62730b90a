#pragma once

// Parallel fields on the hypersurface and the implication checks built on
// them, at two levels: chart points of an actual hypersurface (honest but
// usually vacuous) and pointwise linear-algebra models with the hypothesis
// imposed exactly.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sasakian/induced.hpp"
#include "sasakian/sampling.hpp"

namespace sasakian {

inline constexpr double kLambdaExclusion = 1e-6;

enum class ParallelField { phi, U, V };
std::string_view parallel_field_name(ParallelField f) noexcept;

// Largest component of nabla_X field at one sample, over unit-length X.
double parallel_residual_at(const InducedPoint& p, ParallelField f,
                            std::span<const DirectionPair> pairs);

// Same, maximised over the samples.
double parallel_residual(const StructureSamples& s, ParallelField f);

enum class Verdict { confirmed, vacuous, refuted };
std::string_view verdict_name(Verdict v) noexcept;

struct Conclusion {
  std::string name;
  std::string equation_ref;
  std::optional<double> residual;  // empty when never evaluated
  std::size_t excluded = 0;
  std::string note;
};

struct ImplicationCheckResult {
  std::string name;
  std::string equation_ref;
  // Smallest hypothesis residual seen (the closest any sample or model came
  // to satisfying the hypothesis).
  double hypothesis_residual = 0.0;
  std::vector<Conclusion> conclusions;
  Verdict verdict = Verdict::vacuous;
  std::string convention;
  std::size_t samples_used = 0;  // samples or models where the hypothesis held
  std::size_t samples_excluded = 0;
  std::size_t samples_total = 0;
  std::optional<std::string> obstruction;
  std::vector<std::pair<std::string, double>> data;
};

struct TheoremTolerances {
  double hypothesis = 1e-6;
  double conclusion = 1e-5;
};

// confirmed iff the hypothesis residual is within tolerance and every
// evaluated conclusion is; vacuous when the hypothesis is not met.
Verdict decide(double hypothesis_residual, const std::vector<Conclusion>& conclusions,
               const TheoremTolerances& tol);

// ---- chart mode ------------------------------------------------------------

ImplicationCheckResult check_phi_parallel_chart(const StructureSamples& s, const TheoremTolerances& tol);
ImplicationCheckResult check_U_parallel_chart(const StructureSamples& s, const TheoremTolerances& tol);
ImplicationCheckResult check_V_parallel_chart(const StructureSamples& s, const TheoremTolerances& tol);
ImplicationCheckResult check_totally_geodesic_chart(const StructureSamples& s, const TheoremTolerances& tol);

// max |v(H_h Y)| over unit Y; asserted without proof in the parallel-phi
// derivation.
double v_of_shape_residual(const StructureSamples& s);

// ---- pointwise models ------------------------------------------------------

// Linear model of a noninvariant hypersurface point: R^(2n+1) with g~ = I,
// phi~ = J (+) 0, xi = e_last, unit normal N = lambda xi + sqrt(1 - lambda^2) m
// for a unit m in R^2n, and a random non-orthonormal basis of N^perp.
// (phi, u, U, V, v, lambda, g) come from solving the frame system exactly;
// h, H, w and d lambda are free and set by each theorem check.
struct PointwiseModel {
  int n = 0;
  double lambda = 0.0;
  Eigen::MatrixXd basis;  // (2n+1) x 2n
  Eigen::VectorXd normal;
  Eigen::MatrixXd g, phi;
  Eigen::VectorXd u, v, U, V;
  Eigen::MatrixXd h, H;
  Eigen::VectorXd w, dlambda;

  [[nodiscard]] int dim() const noexcept { return 2 * n; }
};

PointwiseModel build_model(int n, double lambda, const Eigen::VectorXd& normal_direction, Sampler& rng);

// Draws lambda uniformly from [lo, hi] and a uniform unit direction.
PointwiseModel random_model(int n, double lambda_lo, double lambda_hi, Sampler& rng);

// Largest residual of the induced metric relations and the lambda-gauge
// algebra on unit basis directions.
double model_identity_residual(const PointwiseModel& m);

ImplicationCheckResult check_phi_parallel_model(const PointwiseModel& m, const TheoremTolerances& tol);
ImplicationCheckResult check_U_parallel_model(const PointwiseModel& m, const TheoremTolerances& tol,
                                              Sampler& rng);
ImplicationCheckResult check_V_parallel_model(const PointwiseModel& m, const TheoremTolerances& tol);
ImplicationCheckResult check_totally_geodesic_model(const PointwiseModel& m, const TheoremTolerances& tol,
                                                    Sampler& rng);

// Folds per-model results into one row: refuted if any model refutes,
// confirmed if any confirms, else vacuous. Conclusion residuals are maxima
// over the models where the hypothesis held.
ImplicationCheckResult aggregate(std::vector<ImplicationCheckResult> results);

}  // namespace sasakian
