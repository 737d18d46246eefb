#include "tracelab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_set>

#include <Eigen/QR>

#include "tracelab/functions.hpp"
#include "tracelab/spectral.hpp"

namespace tracelab {

// ---- generation -------------------------------------------------------------

AlgebraPtr random_algebra(const std::vector<BlockRange>& blocks, CounterRng& rng) {
  if (blocks.empty()) throw ConfigError("block spec must be nonempty");
  std::vector<Block> out;
  out.reserve(blocks.size());
  for (const BlockRange& r : blocks) {
    if (r.dim_lo < 1 || r.dim_hi < r.dim_lo) throw ConfigError("bad dim range");
    if (!(r.weight_lo > 0.0) || r.weight_hi < r.weight_lo) throw ConfigError("bad weight range");
    const int dim = rng.uniform_int(r.dim_lo, r.dim_hi);
    const double weight = rng.uniform(r.weight_lo, r.weight_hi);
    out.push_back({dim, weight});
  }
  return make_algebra(std::move(out));
}

namespace {

constexpr double kNormCap = 3.0;

std::vector<Matrix> gaussian_blocks(const AlgebraPtr& algebra, CounterRng& rng) {
  std::vector<Matrix> data;
  data.reserve(algebra->block_count());
  for (const Block& b : algebra->blocks()) {
    Matrix m(b.dim, b.dim);
    for (int r = 0; r < b.dim; ++r) {
      for (int c = 0; c < b.dim; ++c) m(r, c) = rng.next_complex_gaussian();
    }
    data.push_back(std::move(m));
  }
  return data;
}

}  // namespace

AlgebraElement random_element(const AlgebraPtr& algebra, CounterRng& rng, bool norm_cap) {
  AlgebraElement x(algebra, gaussian_blocks(algebra, rng));
  if (norm_cap) {
    const double norm = operator_norm(x);
    if (norm > kNormCap) x = (kNormCap / norm) * x;
  }
  return x;
}

AlgebraElement random_positive(const AlgebraPtr& algebra, CounterRng& rng, bool norm_cap) {
  const AlgebraElement g = random_element(algebra, rng, norm_cap);
  return g.adjoint() * g;
}

AlgebraElement random_unitary_contraction(const AlgebraPtr& algebra, CounterRng& rng,
                                          IsometryKind kind) {
  std::vector<Matrix> data = gaussian_blocks(algebra, rng);
  for (Matrix& m : data) {
    Eigen::HouseholderQR<Matrix> qr(m);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix column phases so the distribution is Haar, not QR-convention bound.
    for (Eigen::Index c = 0; c < q.cols(); ++c) {
      const Complex d = r(c, c);
      const double a = std::abs(d);
      q.col(c) *= a == 0.0 ? Complex(1.0, 0.0) : d / a;
    }
    m = std::move(q);
  }
  AlgebraElement u(algebra, std::move(data));
  if (kind == IsometryKind::Contraction) {
    const double s = 1.0 - rng.next_unit();  // (0, 1]
    u = s * u;
  }
  return u;
}

WeightVector random_weights(int n, ConstraintMode mode, CounterRng& rng) {
  if (n < 1) throw ConfigError("weight vector needs n >= 1");
  std::vector<double> a(static_cast<std::size_t>(n));
  for (double& v : a) v = rng.uniform(0.1, 1.0);
  switch (mode) {
    case ConstraintMode::SumOne: {
      double s = 0.0;
      for (double v : a) s += v;
      for (double& v : a) v /= s;
      break;
    }
    case ConstraintMode::SumInverseOne: {
      double s = 0.0;
      for (double v : a) s += 1.0 / v;
      for (double& v : a) v *= s;
      break;
    }
    case ConstraintMode::SumInvSqrtPairsOne: {
      double s = 0.0;
      for (double v : a) s += 1.0 / std::sqrt(v);
      for (double& v : a) v *= s * s;
      break;
    }
    case ConstraintMode::None: break;
  }
  WeightVector w{std::move(a), mode};
  w.validate();
  return w;
}

// ---- claim registry ----------------------------------------------------------

namespace {

enum class ParamKind { Function, PValue, FixedFunction };
enum class ElementsKind { General, Positive, Pair, XsYs };

struct Unit {
  std::optional<FunctionSpec> fn;
  std::optional<double> p;
  int n = 0;
};

struct Inputs {
  AlgebraPtr algebra;
  std::vector<AlgebraElement> xs;
  std::vector<AlgebraElement> ys;
  WeightVector weights;
};

using Evaluator = std::function<std::vector<InequalityReport>(
    const Unit&, const Inputs&, const Tolerance&, TrialContext)>;

struct ClaimDef {
  std::string id;
  ParamKind param = ParamKind::Function;
  ElementsKind elements = ElementsKind::General;
  std::optional<ConstraintMode> constraint;  // nullopt: no weight draw
  std::vector<std::string> default_functions;
  std::string fixed_function;
  std::function<bool(const FunctionSpec&)> admissible;
  Evaluator eval;
  bool probe = false;
  bool uses_curvature = false;  // fk claims dispatch on f itself, not psi
};

// A unit collapses to equalities (nothing to flip) when its function is
// Both-class (psi claims) or linear (fk claims), or when p = 2.
bool equality_unit(const ClaimDef& def, const FunctionSpec& fn) {
  return def.uses_curvature ? fn.curvature() == Curvature::Linear
                            : (!fn.psi_form() && fn.base().psi_class() == PsiClass::Both);
}

bool admits_phi_class(const FunctionSpec& f, PsiClass a, PsiClass b) {
  if (f.psi_form()) return false;
  const PsiClass c = f.base().psi_class();
  return c == a || c == b;
}

std::vector<InequalityReport> one(InequalityReport r) {
  std::vector<InequalityReport> v;
  v.push_back(std::move(r));
  return v;
}

const std::vector<ClaimDef>& registry() {
  static const std::vector<ClaimDef> defs = [] {
    std::vector<ClaimDef> d;

    auto add_fk = [&d](int variant) {
      ClaimDef def;
      def.id = "fk" + std::to_string(variant);
      def.param = ParamKind::Function;
      def.elements = ElementsKind::Positive;
      const bool weighted = variant <= 2;
      const bool convex = variant == 1 || variant == 3;
      if (weighted) def.constraint = ConstraintMode::SumOne;
      def.default_functions = convex
          ? std::vector<std::string>{"power:2", "power:3", "power:4", "psi:expsq"}
          : std::vector<std::string>{"power:0.5", "power:1", "log1p", "psi:log1p"};
      def.uses_curvature = true;
      if (convex) {
        def.admissible = [](const FunctionSpec& f) { return f.curvature() != Curvature::Concave; };
      } else {
        def.admissible = [](const FunctionSpec& f) { return f.curvature() != Curvature::Convex; };
      }
      def.eval = [variant, weighted](const Unit& u, const Inputs& in, const Tolerance& tol,
                                     TrialContext ctx) {
        return one(check_fk(*u.fn, in.xs, weighted ? &in.weights : nullptr, variant, tol,
                            std::move(ctx)));
      };
      d.push_back(std::move(def));
    };
    add_fk(1);
    add_fk(2);
    add_fk(3);
    add_fk(4);

    auto add_mt = [&d](const std::string& id, PsiClass cls) {
      ClaimDef def;
      def.id = id;
      def.param = ParamKind::Function;
      def.elements = ElementsKind::General;
      def.constraint = ConstraintMode::SumOne;
      def.default_functions = cls == PsiClass::ConvexPsi
          ? std::vector<std::string>{"power:4", "power:3", "expsq", "power:2"}
          : std::vector<std::string>{"power:1", "power:1.5", "log1p", "power:2"};
      def.admissible = [cls](const FunctionSpec& f) {
        return admits_phi_class(f, cls, PsiClass::Both);
      };
      def.eval = [id](const Unit& u, const Inputs& in, const Tolerance& tol, TrialContext ctx) {
        return one(check_weighted_clarkson(id, u.fn->base(), in.xs, in.weights, tol,
                                           std::move(ctx)));
      };
      d.push_back(std::move(def));
    };
    add_mt("mt1", PsiClass::ConvexPsi);
    add_mt("mt2", PsiClass::ConcavePsi);

    {
      ClaimDef def;
      def.id = "clarkson-p";
      def.param = ParamKind::PValue;
      def.elements = ElementsKind::Pair;
      def.eval = [](const Unit& u, const Inputs& in, const Tolerance& tol, TrialContext ctx) {
        return one(check_clarkson_pnorm(in.xs[0], in.xs[1], *u.p, tol, std::move(ctx)));
      };
      d.push_back(std::move(def));
    }
    {
      ClaimDef def;
      def.id = "bk-p";
      def.param = ParamKind::PValue;
      def.elements = ElementsKind::General;
      def.eval = [](const Unit& u, const Inputs& in, const Tolerance& tol, TrialContext ctx) {
        return one(check_bk_pnorm(in.xs, *u.p, tol, std::move(ctx)));
      };
      d.push_back(std::move(def));
    }

    auto add_tr = [&d](const std::string& id, PsiClass cls) {
      ClaimDef def;
      def.id = id;
      def.param = ParamKind::Function;
      def.elements = ElementsKind::General;
      def.default_functions = cls == PsiClass::ConvexPsi
          ? std::vector<std::string>{"power:4", "power:3", "expsq", "power:2"}
          : std::vector<std::string>{"power:1", "power:1.5", "log1p", "power:2"};
      def.admissible = [cls](const FunctionSpec& f) {
        return admits_phi_class(f, cls, PsiClass::Both);
      };
      def.eval = [id](const Unit& u, const Inputs& in, const Tolerance& tol, TrialContext ctx) {
        return one(check_roots_refinement(id, u.fn->base(), in.xs, tol, std::move(ctx)));
      };
      d.push_back(std::move(def));
    };
    add_tr("tr1", PsiClass::ConvexPsi);
    add_tr("tr2", PsiClass::ConcavePsi);

    {
      ClaimDef def;
      def.id = "cor3.3";
      def.param = ParamKind::FixedFunction;
      def.elements = ElementsKind::General;
      def.fixed_function = "expsq";
      def.eval = [](const Unit& u, const Inputs& in, const Tolerance& tol, TrialContext ctx) {
        return one(check_roots_refinement("cor3.3", u.fn->base(), in.xs, tol, std::move(ctx)));
      };
      d.push_back(std::move(def));
    }
    {
      ClaimDef def;
      def.id = "cor3.4";
      def.param = ParamKind::FixedFunction;
      def.elements = ElementsKind::General;
      def.fixed_function = "log1p";
      def.eval = [](const Unit& u, const Inputs& in, const Tolerance& tol, TrialContext ctx) {
        return one(check_roots_refinement("cor3.4", u.fn->base(), in.xs, tol, std::move(ctx)));
      };
      d.push_back(std::move(def));
    }
    {
      ClaimDef def;
      def.id = "cor3.4-literal";
      def.param = ParamKind::FixedFunction;
      def.elements = ElementsKind::General;
      def.fixed_function = "log1p";
      def.probe = true;
      def.eval = [](const Unit&, const Inputs& in, const Tolerance& tol, TrialContext ctx) {
        return one(check_log_refinement_literal(in.xs, tol, std::move(ctx)));
      };
      d.push_back(std::move(def));
    }
    {
      ClaimDef def;
      def.id = "cor3.5";
      def.param = ParamKind::PValue;
      def.elements = ElementsKind::General;
      def.eval = [](const Unit& u, const Inputs& in, const Tolerance& tol, TrialContext ctx) {
        return one(check_schatten_refinement(in.xs, *u.p, tol, std::move(ctx)));
      };
      d.push_back(std::move(def));
    }

    const std::vector<std::string> tl_defaults = {"power:2", "power:1.5", "power:1", "power:4",
                                                  "log1p"};
    auto tl_admissible = [](const FunctionSpec& f) {
      return !f.psi_form() && f.base().psi_class() != PsiClass::Neither;
    };
    {
      ClaimDef def;
      def.id = "tl-literal";
      def.param = ParamKind::Function;
      def.elements = ElementsKind::XsYs;
      def.constraint = ConstraintMode::SumInvSqrtPairsOne;
      def.default_functions = tl_defaults;
      def.admissible = tl_admissible;
      def.probe = true;
      def.eval = [](const Unit& u, const Inputs& in, const Tolerance& tol, TrialContext ctx) {
        return one(check_tl_literal(u.fn->base(), in.xs, in.ys, in.weights, tol, std::move(ctx)));
      };
      d.push_back(std::move(def));
    }
    {
      ClaimDef def;
      def.id = "tl-chain";
      def.param = ParamKind::Function;
      def.elements = ElementsKind::XsYs;
      def.constraint = ConstraintMode::SumInvSqrtPairsOne;
      def.default_functions = tl_defaults;
      def.admissible = tl_admissible;
      def.probe = true;
      def.eval = [](const Unit& u, const Inputs& in, const Tolerance& tol, TrialContext ctx) {
        return check_tl_proof_chain(u.fn->base(), in.xs, in.ys, in.weights, tol, std::move(ctx));
      };
      d.push_back(std::move(def));
    }
    {
      ClaimDef def;
      def.id = "tl1";
      def.param = ParamKind::Function;
      def.elements = ElementsKind::General;
      def.constraint = ConstraintMode::SumInverseOne;
      def.default_functions = {"power:4", "power:3", "power:2", "power:1", "power:1.5", "log1p"};
      def.admissible = tl_admissible;
      def.eval = [](const Unit& u, const Inputs& in, const Tolerance& tol, TrialContext ctx) {
        return one(check_tl1(u.fn->base(), in.xs, in.weights, tol, std::move(ctx)));
      };
      d.push_back(std::move(def));
    }
    {
      ClaimDef def;
      def.id = "cor4.3";
      def.param = ParamKind::PValue;
      def.elements = ElementsKind::General;
      def.constraint = ConstraintMode::SumInverseOne;
      def.eval = [](const Unit& u, const Inputs& in, const Tolerance& tol, TrialContext ctx) {
        return one(check_pnorm_parallelogram(in.xs, in.weights, *u.p, tol, std::move(ctx)));
      };
      d.push_back(std::move(def));
    }
    return d;
  }();
  return defs;
}

const ClaimDef& find_claim(const std::string& id) {
  for (const ClaimDef& def : registry()) {
    if (def.id == id) return def;
  }
  throw UnknownClaimId("unknown claim id '" + id + "'");
}

bool is_exp_family(const Unit& u) {
  return u.fn && u.fn->base().kind() == FunctionKind::ExpSquareMinusOne;
}

Tolerance unit_tolerance(const TrialConfig& config, const Unit& u) {
  Tolerance tol = config.tol;
  if (is_exp_family(u)) tol.rtol = std::max(tol.rtol, 1e-7);
  return tol;
}

std::vector<Unit> expand_units(const ClaimDef& def, const TrialConfig& config,
                               bool directional_only = false) {
  if (config.tuple_size < 1) throw ConfigError("tuple size must be >= 1");
  const int n = def.elements == ElementsKind::Pair ? 2 : config.tuple_size;
  std::vector<Unit> units;
  switch (def.param) {
    case ParamKind::Function: {
      const bool user_supplied = !config.functions.empty();
      const std::vector<std::string>& ids =
          user_supplied ? config.functions : def.default_functions;
      for (const std::string& id : ids) {
        FunctionSpec fn = parse_function(id);
        if (!def.admissible(fn)) {
          if (user_supplied) continue;  // silently filter explicit lists
          throw ConfigError("default function '" + id + "' inadmissible for " + def.id);
        }
        if (directional_only && equality_unit(def, fn)) continue;
        units.push_back(Unit{std::move(fn), std::nullopt, n});
      }
      if (units.empty() && user_supplied && !directional_only)
        throw ConfigError("no admissible functions for claim " + def.id);
      break;
    }
    case ParamKind::PValue: {
      if (config.p_values.empty()) throw ConfigError("p-value list is empty");
      for (double p : config.p_values) {
        if (!(p > 0.0) || !std::isfinite(p)) throw NonpositiveP("p must be finite and > 0");
        if (directional_only && p == 2.0) continue;
        units.push_back(Unit{std::nullopt, p, n});
      }
      break;
    }
    case ParamKind::FixedFunction: {
      Unit u{parse_function(def.fixed_function), std::nullopt, n};
      if (!(directional_only && equality_unit(def, *u.fn))) units.push_back(std::move(u));
      break;
    }
  }
  return units;
}

Inputs generate_inputs(const ClaimDef& def, const Unit& unit, const AlgebraPtr* fixed_algebra,
                       const TrialConfig& config, CounterRng& rng) {
  Inputs in;
  in.algebra = fixed_algebra ? *fixed_algebra : random_algebra(config.blocks, rng);
  if (def.constraint) in.weights = random_weights(unit.n, *def.constraint, rng);
  const bool cap = is_exp_family(unit);
  const int n = unit.n;
  in.xs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    in.xs.push_back(def.elements == ElementsKind::Positive
                        ? random_positive(in.algebra, rng, cap)
                        : random_element(in.algebra, rng, cap));
  }
  if (def.elements == ElementsKind::XsYs) {
    in.ys.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) in.ys.push_back(random_element(in.algebra, rng, cap));
  }
  return in;
}

TrialContext make_context(std::uint64_t seed, const Inputs& in, const Unit& unit) {
  TrialContext ctx;
  ctx.seed = seed;
  for (const Block& b : in.algebra->blocks()) {
    ctx.dims.push_back(b.dim);
    ctx.weights.push_back(b.weight);
  }
  ctx.n = unit.n;
  ctx.alphas = in.weights.alphas;
  if (unit.fn) {
    ctx.function = unit.fn->id();
  } else if (unit.p) {
    ctx.function = ScalarFunction::power(*unit.p).id();
  }
  return ctx;
}

void check_seeds_distinct(const std::vector<std::uint64_t>& seeds) {
  std::unordered_set<std::uint64_t> seen(seeds.begin(), seeds.end());
  if (seen.size() != seeds.size())
    throw NumericError("per-trial seed collision within a campaign");
}

// Index-chunked parallel loop; results land in preassigned slots so the
// outcome is independent of scheduling.
void parallel_for(std::size_t total, int threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || total <= 1) {
    for (std::size_t i = 0; i < total; ++i) body(i);
    return;
  }
  const int k = std::min<int>(threads, static_cast<int>(total));
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(k));
  for (int t = 0; t < k; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = static_cast<std::size_t>(t); i < total;
             i += static_cast<std::size_t>(k))
          body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

ClaimSummary summarize(const std::string& claim, const std::vector<InequalityReport>& reports) {
  ClaimSummary s;
  s.claim = claim;
  for (const InequalityReport& r : reports) {
    ++s.reports;
    switch (r.verdict) {
      case Verdict::Pass: ++s.pass; break;
      case Verdict::Violation: ++s.violation; break;
      case Verdict::Degenerate: ++s.degenerate; break;
      case Verdict::NotApplicable: break;
    }
    if (std::isfinite(r.margin) && (!s.has_min_margin || r.margin < s.min_margin)) {
      s.min_margin = r.margin;
      s.has_min_margin = true;
      s.worst = r.context;
    }
  }
  return s;
}

}  // namespace

const std::vector<std::string>& all_claim_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const ClaimDef& def : registry()) v.push_back(def.id);
    return v;
  }();
  return ids;
}

bool is_probe_claim(const std::string& id) { return find_claim(id).probe; }

bool is_identity_id(const std::string& id) {
  return id == "id1" || id == "ibk" || id == "mo1" || id == "mo2";
}

CampaignResult run_campaign(const TrialConfig& config, const std::vector<std::string>& claims) {
  if (config.trials < 0) throw ConfigError("trials must be >= 0");
  CampaignResult result;
  for (const std::string& claim : claims) {
    const ClaimDef& def = find_claim(claim);
    const std::vector<Unit> units = expand_units(def, config);
    const std::size_t trials = static_cast<std::size_t>(config.trials);
    const std::size_t total = units.size() * trials;

    std::vector<std::uint64_t> seeds(total);
    for (std::size_t i = 0; i < total; ++i) seeds[i] = derive_trial_seed(config.master_seed, claim, i);
    check_seeds_distinct(seeds);

    std::vector<std::vector<InequalityReport>> slots(total);
    parallel_for(total, config.threads, [&](std::size_t flat) {
      const Unit& unit = units[flat / trials];
      CounterRng rng(seeds[flat]);
      const Inputs in = generate_inputs(def, unit, nullptr, config, rng);
      TrialContext ctx = make_context(seeds[flat], in, unit);
      slots[flat] = def.eval(unit, in, unit_tolerance(config, unit), std::move(ctx));
    });

    std::vector<InequalityReport> claim_reports;
    claim_reports.reserve(total);
    for (std::vector<InequalityReport>& s : slots) {
      for (InequalityReport& r : s) claim_reports.push_back(std::move(r));
    }
    result.summaries.push_back(summarize(claim, claim_reports));
    for (InequalityReport& r : claim_reports) result.reports.push_back(std::move(r));
  }
  return result;
}

SelftestResult mutation_selftest(const std::string& claim, const TrialConfig& config) {
  SelftestResult out;
  out.claim = claim;
  const ClaimDef& def = find_claim(claim);
  if (def.probe) return out;  // probes are not asserted, nothing to flip

  const std::vector<Unit> units = expand_units(def, config, /*directional_only=*/true);
  if (units.empty()) return out;
  out.applicable = true;

  constexpr int kFlipTrials = 100;
  for (const Unit& unit : units) {
    const Tolerance tol = unit_tolerance(config, unit);
    for (int t = 0; t < kFlipTrials && out.violations == 0; ++t) {
      const std::uint64_t seed =
          derive_trial_seed(config.master_seed, claim + "#flip", static_cast<std::uint64_t>(out.trials_run));
      CounterRng rng(seed);
      const Inputs in = generate_inputs(def, unit, nullptr, config, rng);
      TrialContext ctx = make_context(seed, in, unit);
      const std::vector<InequalityReport> reports =
          def.eval(unit, in, tol, std::move(ctx));
      ++out.trials_run;
      for (const InequalityReport& r : reports) {
        const std::optional<InequalityReport> flipped = judge_flipped(r, tol);
        if (flipped && flipped->verdict == Verdict::Violation) {
          ++out.violations;
          if (!out.first_violation) out.first_violation = *flipped;
          break;
        }
      }
    }
    if (out.violations > 0) break;
  }
  return out;
}

IdentityCampaignResult run_identity_campaign(const std::string& identity_id,
                                             const TrialConfig& config,
                                             const std::vector<double>* fixed_alphas) {
  if (!is_identity_id(identity_id)) throw UnknownClaimId("unknown identity id '" + identity_id + "'");
  const ConstraintMode mode = identity_constraint(identity_id);
  const bool needs_ys = identity_needs_ys(identity_id);
  const int n = config.tuple_size;
  if (n < 1) throw ConfigError("tuple size must be >= 1");

  std::optional<WeightVector> fixed;
  if (fixed_alphas) {
    fixed = WeightVector{*fixed_alphas, mode};
    if (static_cast<int>(fixed->alphas.size()) != n)
      throw WeightConstraintViolated("alpha count does not match the tuple size");
    fixed->validate();
  }

  const std::size_t trials = static_cast<std::size_t>(std::max(config.trials, 0));
  std::vector<std::uint64_t> seeds(trials);
  for (std::size_t i = 0; i < trials; ++i)
    seeds[i] = derive_trial_seed(config.master_seed, identity_id, i);
  check_seeds_distinct(seeds);

  IdentityCampaignResult out;
  out.identity = identity_id;
  out.records.resize(trials);
  parallel_for(trials, config.threads, [&](std::size_t i) {
    CounterRng rng(seeds[i]);
    const AlgebraPtr algebra = random_algebra(config.blocks, rng);
    const WeightVector w = fixed ? *fixed : random_weights(n, mode, rng);
    std::vector<AlgebraElement> xs;
    xs.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) xs.push_back(random_element(algebra, rng));
    std::vector<AlgebraElement> ys;
    if (needs_ys) {
      ys.reserve(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) ys.push_back(random_element(algebra, rng));
    }
    const IdentitySides sides = identity_sides(identity_id, xs, ys, w);
    IdentityTrialRecord rec;
    rec.residual = operator_norm(sides.lhs - sides.rhs);
    rec.scale = sides.scale;
    rec.perturbed_residual = perturbed_residual(sides, kIdentityMutationEps);
    rec.context.seed = seeds[i];
    for (const Block& b : algebra->blocks()) {
      rec.context.dims.push_back(b.dim);
      rec.context.weights.push_back(b.weight);
    }
    rec.context.n = n;
    rec.context.alphas = w.alphas;
    out.records[i] = std::move(rec);
  });

  out.residuals_ok = true;
  out.mutation_ok = true;
  out.max_ratio = 0.0;
  out.min_perturbed_ratio = std::numeric_limits<double>::infinity();
  for (const IdentityTrialRecord& rec : out.records) {
    const double scale = std::max(rec.scale, std::numeric_limits<double>::min());
    out.max_ratio = std::max(out.max_ratio, rec.residual / scale);
    out.min_perturbed_ratio = std::min(out.min_perturbed_ratio, rec.perturbed_residual / scale);
    if (rec.residual > kIdentityResidualBound * rec.scale) out.residuals_ok = false;
    if (!(rec.perturbed_residual > kIdentityMutationFloor * rec.scale)) out.mutation_ok = false;
  }
  if (out.records.empty()) out.min_perturbed_ratio = 0.0;
  return out;
}

std::optional<FoundInstance> search_counterexample(const CounterexampleQuery& query,
                                                   const TrialConfig& config) {
  if (query.budget <= 0) throw ConfigError("search budget must be > 0");
  if (query.max_dim < 1 || query.max_n < 2) throw ConfigError("search needs max-dim >= 1, max-n >= 2");

  const bool identity = is_identity_id(query.claim);
  const ClaimDef* def = identity ? nullptr : &find_claim(query.claim);

  std::uint64_t counter = 0;
  for (int dim = 1; dim <= query.max_dim; ++dim) {
    const AlgebraPtr algebra = make_algebra({{dim, 1.0}});
    const int n_hi = (def && def->elements == ElementsKind::Pair) ? 2 : query.max_n;
    for (int n = 2; n <= n_hi; ++n) {
      TrialConfig local = config;
      local.tuple_size = n;
      if (identity) {
        const ConstraintMode mode = identity_constraint(query.claim);
        const bool needs_ys = identity_needs_ys(query.claim);
        for (int t = 0; t < query.budget; ++t) {
          const std::uint64_t seed =
              derive_trial_seed(config.master_seed, query.claim + "#cx", counter++);
          CounterRng rng(seed);
          const WeightVector w = random_weights(n, mode, rng);
          std::vector<AlgebraElement> xs, ys;
          for (int j = 0; j < n; ++j) xs.push_back(random_element(algebra, rng));
          if (needs_ys)
            for (int j = 0; j < n; ++j) ys.push_back(random_element(algebra, rng));
          const IdentitySides sides = identity_sides(query.claim, xs, ys, w);
          const double residual = operator_norm(sides.lhs - sides.rhs);
          const double allowed = kIdentityResidualBound * sides.scale;
          if (residual > allowed) {
            FoundInstance found;
            found.report.claim = query.claim;
            found.report.sides = {{"residual", residual}, {"allowed", allowed}};
            found.report.relations = {Relation::LE};
            found.report.margin = allowed - residual;
            found.report.tolerance = allowed;
            found.report.verdict = Verdict::Violation;
            found.report.context.seed = seed;
            found.report.context.dims = {dim};
            found.report.context.weights = {1.0};
            found.report.context.n = n;
            found.report.context.alphas = w.alphas;
            found.algebra = algebra;
            found.xs = std::move(xs);
            found.ys = std::move(ys);
            found.weights = w;
            found.dim = dim;
            found.n = n;
            return found;
          }
        }
        continue;
      }

      const std::vector<Unit> units = expand_units(*def, local);
      for (const Unit& unit : units) {
        const Tolerance tol = unit_tolerance(local, unit);
        for (int t = 0; t < query.budget; ++t) {
          const std::uint64_t seed =
              derive_trial_seed(config.master_seed, query.claim + "#cx", counter++);
          CounterRng rng(seed);
          const Inputs in = generate_inputs(*def, unit, &algebra, local, rng);
          TrialContext ctx = make_context(seed, in, unit);
          const std::vector<InequalityReport> reports = def->eval(unit, in, tol, std::move(ctx));
          for (const InequalityReport& r : reports) {
            if (r.verdict == Verdict::Violation) {
              FoundInstance found;
              found.report = r;
              found.algebra = in.algebra;
              found.xs = in.xs;
              found.ys = in.ys;
              found.weights = in.weights;
              found.dim = dim;
              found.n = n;
              return found;
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace tracelab
