#pragma once

// Seeded random generation and campaign execution. The whole pipeline is a
// pure function of TrialConfig: per-trial seeds are derived from
// (master_seed, claim id, flat trial index), generation consumes the
// counter stream in a fixed documented order (per block: dim then weight;
// then alphas; then xs entries row-major block by block; then ys), and
// aggregation is index-based, so reports are byte-identical regardless of
// thread count.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tracelab/algebra.hpp"
#include "tracelab/identities.hpp"
#include "tracelab/inequalities.hpp"
#include "tracelab/report.hpp"
#include "tracelab/rng.hpp"

namespace tracelab {

struct BlockRange {
  int dim_lo = 1;
  int dim_hi = 4;
  double weight_lo = 0.25;
  double weight_hi = 2.0;
};

struct TrialConfig {
  std::uint64_t master_seed = 0;
  int trials = 200;
  std::vector<BlockRange> blocks = {BlockRange{}, BlockRange{}};
  int tuple_size = 3;
  std::vector<std::string> functions;              // empty: per-claim defaults
  std::vector<double> p_values = {0.5, 1.0, 1.5, 2.0, 3.0, 4.0};
  Tolerance tol{};
  int threads = 1;
};

// ---- generation -----------------------------------------------------------

AlgebraPtr random_algebra(const std::vector<BlockRange>& blocks, CounterRng& rng);

/// Independent standard complex Gaussian entries per block; when norm_cap is
/// set (exponential-family campaigns) the element is rescaled to ||x|| <= 3.
AlgebraElement random_element(const AlgebraPtr& algebra, CounterRng& rng, bool norm_cap = false);

/// g* g for a random g: positive semidefinite by construction.
AlgebraElement random_positive(const AlgebraPtr& algebra, CounterRng& rng, bool norm_cap = false);

enum class IsometryKind { Unitary, Contraction };

/// Unitary via phase-fixed QR of a Gaussian block; Contraction scales the
/// unitary by s uniform in (0, 1].
AlgebraElement random_unitary_contraction(const AlgebraPtr& algebra, CounterRng& rng,
                                          IsometryKind kind);

/// Positive uniforms in [0.1, 1] rescaled to satisfy the mode exactly:
/// SumOne divides by the sum, SumInverseOne multiplies by sum(1/a_j),
/// SumInvSqrtPairsOne scales by (sum a_j^(-1/2))^2. Mode None keeps the
/// raw uniforms.
WeightVector random_weights(int n, ConstraintMode mode, CounterRng& rng);

// ---- claims ----------------------------------------------------------------

/// Stable claim ids in canonical output order.
const std::vector<std::string>& all_claim_ids();

/// Probes are expected to contain Violations and are excluded from the
/// `--claim all` pass/fail gate unless explicitly included.
bool is_probe_claim(const std::string& id);

bool is_identity_id(const std::string& id);

// ---- campaigns -------------------------------------------------------------

struct ClaimSummary {
  std::string claim;
  int reports = 0;
  int pass = 0;
  int violation = 0;
  int degenerate = 0;
  double min_margin = 0.0;
  bool has_min_margin = false;
  TrialContext worst;  // context of the minimum-margin report
};

struct CampaignResult {
  std::vector<InequalityReport> reports;
  std::vector<ClaimSummary> summaries;
};

CampaignResult run_campaign(const TrialConfig& config, const std::vector<std::string>& claims);

/// Re-runs a claim with the relation direction inverted. A non-equality
/// claim must record at least one Violation within 100 trials; claims whose
/// configured chain has no direction (Both-class functions, p = 2) report
/// NotApplicable (applicable = false).
struct SelftestResult {
  std::string claim;
  bool applicable = false;
  int trials_run = 0;
  int violations = 0;
  std::optional<InequalityReport> first_violation;
};

SelftestResult mutation_selftest(const std::string& claim, const TrialConfig& config);

// ---- identity campaigns ----------------------------------------------------

struct IdentityTrialRecord {
  double residual = 0.0;
  double scale = 0.0;
  double perturbed_residual = 0.0;  // after adding 1e-3 to one entry of the LHS
  TrialContext context;
};

struct IdentityCampaignResult {
  std::string identity;
  std::vector<IdentityTrialRecord> records;
  double max_ratio = 0.0;            // max residual / scale
  double min_perturbed_ratio = 0.0;  // min perturbed residual / scale
  bool residuals_ok = false;         // every residual <= 1e-10 * scale
  bool mutation_ok = false;          // every perturbed residual > 1e-8 * scale
};

inline constexpr double kIdentityResidualBound = 1e-10;
inline constexpr double kIdentityMutationFloor = 1e-8;
inline constexpr double kIdentityMutationEps = 1e-3;

/// fixed_alphas, when given, replaces the random weight draw (it is still
/// validated against the identity's constraint mode).
IdentityCampaignResult run_identity_campaign(const std::string& identity_id,
                                             const TrialConfig& config,
                                             const std::vector<double>* fixed_alphas = nullptr);

// ---- counterexample search --------------------------------------------------

struct CounterexampleQuery {
  std::string claim;
  int budget = 200;  // trials per (dim, n, unit) cell
  int max_dim = 3;
  int max_n = 4;
};

struct FoundInstance {
  InequalityReport report;
  AlgebraPtr algebra;
  std::vector<AlgebraElement> xs;
  std::vector<AlgebraElement> ys;
  WeightVector weights;
  int dim = 0;
  int n = 0;
};

/// Enumerates single-block algebras by (dim asc, n asc) and returns the
/// first Violation, i.e. a minimal-found violating instance. Identity ids
/// search for residual > 1e-10 * scale.
std::optional<FoundInstance> search_counterexample(const CounterexampleQuery& query,
                                                   const TrialConfig& config);

}  // namespace tracelab
