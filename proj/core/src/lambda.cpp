#include "lambdap/lambda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "lambdap/parallel.hpp"
#include "lambdap/rng.hpp"

namespace lambdap {

namespace {

// |f|^{p-2} f, with the common exponents special-cased.
inline double dual_power(double f, double p) {
  if (p == 2.0) return f;
  if (p == 4.0) return f * f * f;
  if (p == 3.0) return f * std::abs(f);
  return f == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(f), p - 1.0), f);
}

struct KsRun {
  double value = 0.0;
  std::vector<double> a;
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
  std::size_t violations = 0;
};

KsRun ks_power_iteration(const OrthogonalSystem& sys, const IndexSet& S, double p,
                         std::vector<double> a, const KsOptions& opts) {
  const std::size_t m = S.size(), g = sys.grid_size();
  const auto w = sys.weights();
  std::vector<double> f(g), d(g);
  auto normalize = [](std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    s = std::sqrt(s);
    if (s == 0.0) return false;
    for (double& x : v) x /= s;
    return true;
  };
  auto evaluate = [&](const std::vector<double>& coef) {
    std::fill(f.begin(), f.end(), 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const auto r = sys.row(S[j]);
      const double c = coef[j];
      for (std::size_t k = 0; k < g; ++k) f[k] += c * r[k];
    }
    return lp_norm(w, f, p);
  };

  KsRun run;
  if (!normalize(a)) a.assign(m, 1.0 / std::sqrt(static_cast<double>(m)));
  double obj = evaluate(a);
  run.trace.push_back(obj);
  double best = obj;
  std::vector<double> best_a = a, next(m);
  for (int it = 0; it < opts.max_iter; ++it) {
    for (std::size_t k = 0; k < g; ++k) d[k] = dual_power(f[k], p);
    for (std::size_t j = 0; j < m; ++j) next[j] = analyze_one(sys, S[j], d);
    if (!normalize(next)) break;
    const double nobj = evaluate(next);
    ++run.iterations;
    run.trace.push_back(nobj);
    if (nobj < obj - 1e-12 * std::max(1.0, obj)) ++run.violations;
    const double change = std::abs(nobj - obj) / std::max(obj, std::numeric_limits<double>::min());
    a = next;
    obj = nobj;
    if (obj > best) {
      best = obj;
      best_a = a;
    }
    if (change < opts.tol) {
      run.converged = true;
      break;
    }
  }
  run.value = best;
  run.a = std::move(best_a);
  return run;
}

}  // namespace

LambdaEstimate estimate_ks(const OrthogonalSystem& sys, const IndexSet& S, double p,
                           const KsOptions& opts) {
  if (S.empty()) throw std::invalid_argument("estimate_ks: S must be nonempty");
  check_index_set(S, sys.size(), "estimate_ks");
  if (!(p >= 2.0)) throw std::invalid_argument("estimate_ks: p must be >= 2");
  if (opts.restarts < 1 || opts.max_iter < 0)
    throw std::invalid_argument("estimate_ks: bad restart/iteration counts");

  const std::size_t m = S.size();
  const CounterRng rng(derive_seed(opts.seed, Stream::restarts));
  const auto runs = parallel_map<KsRun>(
      static_cast<std::size_t>(opts.restarts),
      [&](std::size_t r) {
        std::vector<double> a(m, 1.0);
        if (r > 0)
          for (std::size_t j = 0; j < m; ++j) a[j] = rng.normal(j, r);
        return ks_power_iteration(sys, S, p, std::move(a), opts);
      },
      opts.threads);

  LambdaEstimate est;
  est.p = p;
  est.restarts_used = opts.restarts;
  est.converged = true;
  std::size_t best = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    est.converged = est.converged && runs[r].converged;
    est.iterations += runs[r].iterations;
    est.monotonicity_violations += runs[r].violations;
    if (runs[r].value > runs[best].value) best = r;
  }
  est.value = runs[best].value;
  est.trace = runs[best].trace;
  est.argmax = CoeffVector(sys.size(), S, runs[best].a);
  return est;
}

double ks_flat_lower_bound(std::size_t n, std::size_t s, double p) {
  if (!(p > 2.0)) throw std::invalid_argument("ks_flat_lower_bound: p must exceed 2");
  if (s > 2 * n + 1) throw std::invalid_argument("ks_flat_lower_bound: s must be <= 2n + 1");
  if (s == 0) return 0.0;
  const double pd = p / (p - 1.0);
  return std::sqrt(static_cast<double>(s)) / dirichlet_norm(n, pd);
}

InterferenceBound interference_lower_bound(unsigned k, double p, double r, std::size_t nodes) {
  if (!(p > 2.0)) throw std::invalid_argument("interference_lower_bound: p must exceed 2");
  if (!(r >= p)) throw std::invalid_argument("interference_lower_bound: r must be >= p");
  if (k == 0 || k > 40) throw std::invalid_argument("interference_lower_bound: k out of range");
  if (nodes < 64) throw std::invalid_argument("interference_lower_bound: grid too coarse");
  InterferenceBound out;
  out.k = k;
  // floor(4^{k/p}); the guard absorbs pow rounding at exact powers
  out.set_size = static_cast<std::size_t>(std::floor(std::pow(4.0, k / p) * (1.0 + 1e-14)));
  const double s = static_cast<double>(out.set_size);
  const double half = std::ldexp(1.0, -static_cast<int>(k)) / 10.0;
  // The modulus |sum_{j in S_k} e^{2 pi i j u}| = |sin(pi s u) / sin(pi u)|
  // does not depend on the starting frequency.  It is even in u.
  const double h = half / static_cast<double>(nodes);
  double acc = 0.0;
  for (std::size_t j = 0; j < nodes; ++j) {
    const double u = (static_cast<double>(j) + 0.5) * h;
    double mod = 1.0;
    if (out.set_size > 1) mod = std::abs(std::sin(std::numbers::pi * s * u) / std::sin(std::numbers::pi * u));
    acc += std::pow(mod, r);
  }
  const double integral = 2.0 * acc * h;
  out.value = std::pow(integral, 1.0 / r) / std::sqrt(s);
  out.reference = std::exp2(static_cast<double>(k) * (1.0 / p - 1.0 / r));
  out.ratio = out.value / out.reference;
  return out;
}

namespace {

IndexSet intersect(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Positions of the `m` largest |x| in `idx` order, ties to the earlier one.
std::vector<std::size_t> top_positions(const std::vector<double>& x, std::size_t m) {
  std::vector<std::size_t> pos(x.size());
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  m = std::min(m, pos.size());
  std::partial_sort(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(m), pos.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double xa = std::abs(x[a]), xb = std::abs(x[b]);
                      return xa > xb || (xa == xb && a < b);
                    });
  pos.resize(m);
  return pos;
}

// Shared evaluation for the (b, c) search.  Coefficients live on the
// active sets B1 (A candidates), B2 (b) and B3 (c).
class TripleProblem {
 public:
  TripleProblem(const OrthogonalSystem& sys, IndexSet B1, IndexSet B2, IndexSet B3, double p,
                std::size_t m1)
      : sys_(sys), B1_(std::move(B1)), B2_(std::move(B2)), B3_(std::move(B3)), p_(p), m1_(m1),
        g_(sys.grid_size()), fb_(g_), fc_(g_), wt_(g_), tmp_(g_) {}

  const IndexSet& B1() const { return B1_; }
  const IndexSet& B2() const { return B2_; }
  const IndexSet& B3() const { return B3_; }

  struct Eval {
    double value = 0.0;
    std::vector<std::size_t> A;  // positions into B1
    std::vector<int> signs;
  };

  // b, c given on B2, B3.
  Eval evaluate(const std::vector<double>& b, const std::vector<double>& c) {
    synth(B2_, b, fb_);
    synth(B3_, c, fc_);
    for (std::size_t k = 0; k < g_; ++k) {
      wt_[k] = weight(fc_[k]);
      tmp_[k] = fb_[k] * wt_[k];
    }
    std::vector<double> x(B1_.size());
    for (std::size_t t = 0; t < B1_.size(); ++t) x[t] = analyze_one(sys_, B1_[t], tmp_);
    Eval e;
    e.A = top_positions(x, m1_);
    for (auto t : e.A) {
      e.value += std::abs(x[t]);
      e.signs.push_back(x[t] < 0 ? -1 : 1);
    }
    return e;
  }

  // psi = sum_{A} s_i phi_i, evaluated after `evaluate`.
  void build_psi(const Eval& e, std::vector<double>& psi) const {
    psi.assign(g_, 0.0);
    for (std::size_t a = 0; a < e.A.size(); ++a) {
      const auto r = sys_.row(B1_[e.A[a]]);
      const double s = e.signs[a];
      for (std::size_t k = 0; k < g_; ++k) psi[k] += s * r[k];
    }
  }

  // Linear functional in b for fixed (A, s, c): v_j = <phi_j, psi w(c)>.
  std::vector<double> b_functional(const std::vector<double>& psi) {
    for (std::size_t k = 0; k < g_; ++k) tmp_[k] = psi[k] * wt_[k];
    std::vector<double> v(B2_.size());
    for (std::size_t t = 0; t < B2_.size(); ++t) v[t] = analyze_one(sys_, B2_[t], tmp_);
    return v;
  }

  // Gradient in c of <psi f_b, (1 + |f_c|)^{p-2}>.
  std::vector<double> c_gradient(const std::vector<double>& psi) {
    for (std::size_t k = 0; k < g_; ++k) {
      const double h = fc_[k];
      const double sg = h > 0 ? 1.0 : (h < 0 ? -1.0 : 0.0);
      tmp_[k] = psi[k] * fb_[k] * (p_ - 2.0) * std::pow(1.0 + std::abs(h), p_ - 3.0) * sg;
    }
    std::vector<double> gr(B3_.size());
    for (std::size_t t = 0; t < B3_.size(); ++t) gr[t] = analyze_one(sys_, B3_[t], tmp_);
    return gr;
  }

  double weight(double h) const {
    const double base = 1.0 + std::abs(h);
    if (p_ == 3.0) return base;
    if (p_ == 4.0) return base * base;
    return std::pow(base, p_ - 2.0);
  }

 private:
  void synth(const IndexSet& idx, const std::vector<double>& coef, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t t = 0; t < idx.size(); ++t) {
      if (coef[t] == 0.0) continue;
      const auto r = sys_.row(idx[t]);
      for (std::size_t k = 0; k < g_; ++k) out[k] += coef[t] * r[k];
    }
  }

  const OrthogonalSystem& sys_;
  IndexSet B1_, B2_, B3_;
  double p_;
  std::size_t m1_;
  std::size_t g_;
  std::vector<double> fb_, fc_, wt_, tmp_;
};

// Keep the m largest entries (ties to lower position); zero the rest.
void hard_threshold(std::vector<double>& v, std::size_t m) {
  if (m >= v.size()) return;
  const auto keep = top_positions(v, m);
  std::vector<double> out(v.size(), 0.0);
  for (auto t : keep) out[t] = v[t];
  v.swap(out);
}

double euclid(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

struct TripleRun {
  double value = 0.0;
  IndexSet A;
  std::vector<double> b, c;  // on B2, B3
};

TripleRun maximize_triple(TripleProblem& prob, std::size_t m2, std::size_t m3, int restarts,
                          int max_iter, std::uint64_t seed) {
  const std::size_t nb = prob.B2().size(), nc = prob.B3().size();
  TripleRun best;
  best.b.assign(nb, 0.0);
  best.c.assign(nc, 0.0);
  if (prob.B1().empty() || nb == 0) return best;

  const CounterRng rng(seed);
  std::vector<double> psi;
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> b(nb), c(nc, 0.0);
    for (std::size_t t = 0; t < nb; ++t) b[t] = rng.normal(t, 2 * static_cast<std::uint64_t>(r));
    hard_threshold(b, m2);
    if (double s = euclid(b); s > 0)
      for (double& x : b) x /= s;
    if (r > 0 && nc > 0) {
      for (std::size_t t = 0; t < nc; ++t)
        c[t] = rng.normal(t, 2 * static_cast<std::uint64_t>(r) + 1);
      hard_threshold(c, m3);
      if (double s = euclid(c); s > 0)
        for (double& x : c) x /= s;
    }

    auto cur = prob.evaluate(b, c);
    for (int it = 0; it < max_iter; ++it) {
      const double start = cur.value;
      // b-step: exact maximizer of the linear functional for fixed (A, s, c).
      prob.build_psi(cur, psi);
      auto v = prob.b_functional(psi);
      hard_threshold(v, m2);
      if (double s = euclid(v); s > 0) {
        for (double& x : v) x /= s;
        auto cand = prob.evaluate(v, c);
        if (cand.value >= cur.value) {
          b = std::move(v);
          cur = std::move(cand);
        } else {
          cur = prob.evaluate(b, c);
        }
      }
      // c-step: projected gradient ascent with backtracking.
      if (nc > 0) {
        cur = prob.evaluate(b, c);
        prob.build_psi(cur, psi);
        const auto gr = prob.c_gradient(psi);
        const double gn = euclid(gr);
        if (gn > 0) {
          double eta = 0.5;
          for (int bt = 0; bt < 10; ++bt, eta *= 0.5) {
            std::vector<double> cn(nc);
            for (std::size_t t = 0; t < nc; ++t) cn[t] = c[t] + eta * gr[t] / gn;
            hard_threshold(cn, m3);
            if (double s = euclid(cn); s > 1.0)
              for (double& x : cn) x /= s;
            auto cand = prob.evaluate(b, cn);
            if (cand.value > cur.value) {
              c = std::move(cn);
              cur = std::move(cand);
              break;
            }
          }
        }
        cur = prob.evaluate(b, c);
      }
      if (cur.value - start <= 1e-10 * std::max(1.0, std::abs(start))) break;
    }
    if (cur.value > best.value || r == 0) {
      best.value = cur.value;
      best.A.clear();
      for (auto t : cur.A) best.A.push_back(prob.B1()[t]);
      std::sort(best.A.begin(), best.A.end());
      best.b = b;
      best.c = c;
    }
  }
  return best;
}

void check_selector(const SelectorSample& s, std::size_t n, const char* what) {
  if (s.n != n || s.bits.size() != n)
    throw std::invalid_argument(std::string(what) + ": selector length does not match n");
}

}  // namespace

InnerSup triple_inner_sup(const OrthogonalSystem& sys, const SelectorSample& xi1,
                          const SelectorSample& xi2, const SelectorSample& xi3,
                          const CoeffVector& b, const CoeffVector& c, double p, std::size_t m1,
                          const IndexSet& base) {
  const std::size_t n = sys.size(), g = sys.grid_size();
  check_selector(xi1, n, "triple_inner_sup");
  check_selector(xi2, n, "triple_inner_sup");
  check_selector(xi3, n, "triple_inner_sup");
  if (b.size() != n || c.size() != n)
    throw std::invalid_argument("triple_inner_sup: coefficient length mismatch");
  std::vector<double> bm(n), cm(n);
  for (std::size_t i = 0; i < n; ++i) {
    bm[i] = xi2.bits[i] ? b[i] : 0.0;
    cm[i] = xi3.bits[i] ? c[i] : 0.0;
  }
  std::vector<double> fb(g), fc(g);
  synthesize_into(sys, bm, fb);
  synthesize_into(sys, cm, fc);
  for (std::size_t k = 0; k < g; ++k) fb[k] *= std::pow(1.0 + std::abs(fc[k]), p - 2.0);
  IndexSet cand = xi1.active();
  if (!base.empty()) cand = intersect(cand, base);
  std::vector<double> x(cand.size());
  for (std::size_t t = 0; t < cand.size(); ++t) x[t] = analyze_one(sys, cand[t], fb);
  InnerSup out;
  for (auto t : top_positions(x, m1)) {
    out.value += std::abs(x[t]);
    out.A.push_back(cand[t]);
    out.signs.push_back(x[t] < 0 ? -1 : 1);
  }
  return out;
}

TripleNormEstimate estimate_k_triple(const OrthogonalSystem& sys,
                                     std::span<const SelectorSample> omega1,
                                     const SelectorSample& omega2, const SelectorSample& omega3,
                                     const TripleConfig& cfg) {
  const std::size_t n = sys.size();
  if (cfg.m1 == 0 || cfg.m2 == 0 || cfg.m3 == 0 || cfg.m1 > n || cfg.m2 > n || cfg.m3 > n)
    throw std::invalid_argument("estimate_k_triple: m values must lie in [1, n]");
  if (!(cfg.p > 2.0)) throw std::invalid_argument("estimate_k_triple: p must exceed 2");
  if (omega1.empty()) throw std::invalid_argument("estimate_k_triple: need omega_1 draws");
  check_selector(omega2, n, "estimate_k_triple");
  check_selector(omega3, n, "estimate_k_triple");
  for (const auto& s : omega1) check_selector(s, n, "estimate_k_triple");
  if (cfg.base_set) check_index_set(*cfg.base_set, n, "estimate_k_triple base_set");

  const double q0 = cfg.q0 > 0 ? cfg.q0 : std::log(static_cast<double>(n));
  if (!(q0 > 0)) throw std::invalid_argument("estimate_k_triple: q0 must be positive");
  auto restrict_base = [&](IndexSet s) { return cfg.base_set ? intersect(s, *cfg.base_set) : s; };
  const IndexSet B2 = restrict_base(omega2.active());
  const IndexSet B3 = restrict_base(omega3.active());

  const auto runs = parallel_map<TripleRun>(
      omega1.size(),
      [&](std::size_t d) {
        TripleProblem prob(sys, restrict_base(omega1[d].active()), B2, B3, cfg.p, cfg.m1);
        return maximize_triple(prob, cfg.m2, cfg.m3, cfg.restarts, cfg.max_iter,
                               derive_seed(cfg.seed, Stream::restarts, d));
      },
      cfg.threads);

  TripleNormEstimate est;
  est.m1 = cfg.m1;
  est.m2 = cfg.m2;
  est.m3 = cfg.m3;
  est.q0 = q0;
  est.samples = runs.size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.m1));
  double acc = 0.0;
  std::size_t best = 0;
  for (std::size_t d = 0; d < runs.size(); ++d) {
    const double v = runs[d].value * scale;
    est.per_draw.push_back(v);
    acc += std::pow(v, q0);
    if (runs[d].value > runs[best].value) best = d;
  }
  est.value = std::pow(acc / static_cast<double>(runs.size()), 1.0 / q0);
  est.witness.A = runs[best].A;
  est.witness.b = CoeffVector(n, B2, runs[best].b);
  est.witness.c = CoeffVector(n, B3, runs[best].c);
  return est;
}

double default_sigma(double p, const KestVariant& variant) { return variant.restricted ? 1.0 : p / 2.0; }

double kest_rhs(std::size_t m1, std::size_t m2, std::size_t m3, double delta, double p, double K2,
                double K3, double sigma, const KestVariant& variant) {
  if (m1 == 0 || m2 == 0 || m3 == 0) throw std::invalid_argument("kest_rhs: m values must be positive");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("kest_rhs: delta must lie in (0, 1]");
  if (!(K2 >= 1.0 && K3 >= 1.0)) throw std::invalid_argument("kest_rhs: K values must be >= 1");
  if (!(sigma < p)) throw std::invalid_argument("kest_rhs: sigma must be < p");
  double first = 0.0;
  if (variant.restricted) {
    if (!(variant.p1 > 0.0) || !(variant.delta_prime > 0.0 && variant.delta_prime <= 1.0))
      throw std::invalid_argument("kest_rhs: bad restricted-variant parameters");
    first = variant.delta_prime * std::pow(static_cast<double>(m3), p / variant.p1 - 1.0);
  } else {
    first = delta * std::pow(static_cast<double>(m3), p / 2.0 - 1.0);
  }
  const double second = static_cast<double>(m2 + m3) / static_cast<double>(m1);
  return std::sqrt(first + second) * std::pow(1.0 + K2 + K3, p - sigma);
}

}  // namespace lambdap
