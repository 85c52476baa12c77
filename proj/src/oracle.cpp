#include "regimecast/oracle.hpp"

#include <cmath>
#include <ostream>
#include <random>

#include "regimecast/csv.hpp"

namespace regimecast {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t rep) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (rep + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Eigen::VectorXd simulate_mixture(const RegimeMixtureSpec& spec, int extra) {
  if (spec.t_N < 0 || spec.t_C < 0 || extra < 0) throw Error(Errc::InvalidArgument, "negative block length");
  constexpr int burn = 200;
  const int n = spec.t_N + spec.t_C + extra;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> nd(0.0, 1.0);

  double y_prev = spec.params_N.mean();
  double e_prev = 0.0;
  Eigen::VectorXd out(n);
  for (int t = -burn; t < n; ++t) {
    const Params& par = t < spec.t_N ? spec.params_N : spec.params_C;
    const double e = std::sqrt(par.sigma2) * nd(rng);
    const double rho = par.phi.size() ? par.phi(0) : 0.0;
    const double th = par.theta.size() ? par.theta(0) : 0.0;
    const double y = par.alpha + rho * y_prev + e + th * e_prev;
    if (t >= 0) out(t) = y;
    y_prev = y;
    e_prev = e;
  }
  return out;
}

namespace {

double upper_tail(double t) { return 0.5 * std::erfc(t / std::sqrt(2.0)); }

struct RepResult {
  double alpha_hat;
  Eigen::VectorXd bias;
};

Series estimation_sample(const RegimeMixtureSpec& spec, const Eigen::VectorXd& all) {
  Series est;
  est.name = "mixture";
  est.values = all.head(spec.t_N + spec.t_C);
  return est;
}

// Full-sample fit and its forecast errors at the regime-C origin.
RepResult full_sample_rep(const RegimeMixtureSpec& spec, int H, const FitOptions& fit) {
  const Eigen::VectorXd all = simulate_mixture(spec, H);
  const Series est = estimation_sample(spec, all);
  const Params par = fit_mle_detailed(est.values, {1, 1}, {}, fit).params;
  return {par.alpha, all.tail(H) - forecast_from_history(par, est, H, fit.likelihood).values};
}

// Refit on the regime-C block only, forecast from the full history.
Eigen::VectorXd similarity_rep(const RegimeMixtureSpec& spec, int H, const FitOptions& fit) {
  const Eigen::VectorXd all = simulate_mixture(spec, H);
  const Series est = estimation_sample(spec, all);
  const Params pc = fit_mle_detailed(est.values.tail(spec.t_C), {1, 1}, {}, fit).params;
  return all.tail(H) - forecast_from_history(pc, est, H, fit.likelihood).values;
}

struct Moments {
  Eigen::VectorXd s1, s2;
  int n = 0;
  explicit Moments(int H) : s1(Eigen::VectorXd::Zero(H)), s2(Eigen::VectorXd::Zero(H)) {}
  void add(const Eigen::VectorXd& x) {
    s1 += x;
    s2 += x.cwiseProduct(x);
    ++n;
  }
  Eigen::VectorXd mean() const { return s1 / n; }
  Eigen::VectorXd se() const {
    const Eigen::VectorXd m = mean();
    const Eigen::VectorXd var = ((s2 / n - m.cwiseProduct(m)) * (double(n) / (n - 1))).cwiseMax(0.0);
    return (var / n).cwiseSqrt();
  }
};

}  // namespace

PlimReport verify_plim(const RegimeMixtureSpec& spec, int reps, const PlimOptions& opt) {
  if (reps < 100) throw Error(Errc::InvalidArgument, "verify_plim needs at least 100 replications");
  if (!(spec.params_C.alpha > spec.params_N.alpha))
    throw Error(Errc::InvalidArgument, "crisis intercept must exceed the normal intercept");
  const int H = opt.H;
  PlimReport rep;
  Moments bias(H);
  double asum = 0.0;
  const double share = static_cast<double>(spec.t_C) / (spec.t_N + spec.t_C);
  for (int i = 0; i < reps; ++i) {
    RegimeMixtureSpec s = spec;
    s.seed = stream_seed(spec.seed, static_cast<std::uint64_t>(i));
    const RepResult r = full_sample_rep(s, H, opt.fit);
    rep.records.push_back({i, share, r.alpha_hat, r.bias});
    asum += r.alpha_hat;
    bias.add(r.bias);
  }
  rep.alpha_hat_mean = asum / reps;
  rep.alpha_in_interval = rep.alpha_hat_mean > spec.params_N.alpha && rep.alpha_hat_mean < spec.params_C.alpha;

  rep.bias_mean = bias.mean();
  rep.bias_se = bias.se();
  rep.bias_p.resize(H);
  for (int h = 0; h < H; ++h) rep.bias_p(h) = upper_tail(rep.bias_mean(h) / rep.bias_se(h));
  rep.bias_positive_all = (rep.bias_mean.array() > 0.0).all();
  rep.max_bias_p = rep.bias_p.maxCoeff();

  RegimeMixtureSpec sim_spec = spec;
  sim_spec.t_C = opt.similarity_t_C;
  Moments sim(H);
  for (int i = 0; i < reps; ++i) {
    sim_spec.seed = stream_seed(spec.seed ^ 0x51f1ULL, static_cast<std::uint64_t>(i));
    sim.add(similarity_rep(sim_spec, H, opt.fit));
  }
  rep.sim_bias_mean = sim.mean();
  rep.sim_bias_se = sim.se();
  rep.sim_bias_max_abs_t = rep.sim_bias_mean.cwiseQuotient(rep.sim_bias_se).cwiseAbs().maxCoeff();

  // Convergence of the intercept estimate as the crisis block shrinks,
  // holding the total length fixed.
  const int T = spec.t_N + spec.t_C;
  for (double sh : opt.shares) {
    RegimeMixtureSpec s = spec;
    s.t_C = static_cast<int>(std::lround(sh * T));
    s.t_N = T - s.t_C;
    double a = 0.0;
    for (int i = 0; i < opt.schedule_reps; ++i) {
      s.seed = stream_seed(spec.seed ^ 0x5c4edULL, static_cast<std::uint64_t>(i));
      a += full_sample_rep(s, H, opt.fit).alpha_hat;
    }
    rep.schedule_share.push_back(sh);
    rep.schedule_alpha.push_back(a / opt.schedule_reps);
  }
  rep.schedule_converges = !rep.schedule_alpha.empty();
  for (std::size_t k = 1; k < rep.schedule_alpha.size(); ++k) {
    const double d_prev = std::abs(rep.schedule_alpha[k - 1] - spec.params_N.alpha);
    const double d_cur = std::abs(rep.schedule_alpha[k] - spec.params_N.alpha);
    if (d_cur > d_prev + 0.02) rep.schedule_converges = false;
  }
  if (!rep.schedule_alpha.empty() && opt.shares.back() == 0.0 &&
      std::abs(rep.schedule_alpha.back() - spec.params_N.alpha) > 0.1)
    rep.schedule_converges = false;
  return rep;
}

void write_plim_csv(std::ostream& os, const PlimReport& report) {
  const int H = report.records.empty() ? 0 : static_cast<int>(report.records.front().bias.size());
  os << "rep,t_c_share,alpha_hat";
  for (int h = 1; h <= H; ++h) os << ",bias_h" << h;
  os << '\n';
  for (const auto& r : report.records) {
    os << r.rep << ',' << fmt_num(r.t_c_share) << ',' << fmt_num(r.alpha_hat);
    for (int h = 0; h < H; ++h) os << ',' << fmt_num(r.bias(h));
    os << '\n';
  }
}

}  // namespace regimecast
