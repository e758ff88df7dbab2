#include "permstat/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/binomial.hpp>

#include "json.hpp"
#include "permstat/exchange.hpp"
#include "permstat/permutation.hpp"
#include "permstat/rng.hpp"

namespace permstat {
namespace {

constexpr std::uint64_t kBlock = 16384;  // fixed work unit; not tied to thread count

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void check_grid(std::span<const double> grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0)) throw std::invalid_argument("t grid must be non-negative");
    if (i > 0 && grid[i] < grid[i - 1]) throw std::invalid_argument("t grid must be ascending");
  }
}

// Runs fn(block_first, block_last, worker_state&) over fixed-size blocks.
template <typename State, typename Fn>
std::vector<State> run_blocks(std::uint64_t samples, int threads, Fn&& fn) {
  const std::uint64_t nblocks = (samples + kBlock - 1) / kBlock;
  const int nthreads = static_cast<int>(std::min<std::uint64_t>(
      static_cast<std::uint64_t>(resolve_threads(threads)), std::max<std::uint64_t>(nblocks, 1)));
  std::vector<State> states(nthreads);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&](int w) {
    for (std::uint64_t b = next.fetch_add(1); b < nblocks; b = next.fetch_add(1)) {
      const std::uint64_t first = b * kBlock;
      const std::uint64_t last = std::min(first + kBlock, samples);
      fn(b, first, last, states[w]);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nthreads - 1);
  for (int w = 1; w < nthreads; ++w) pool.emplace_back(worker, w);
  worker(0);
  for (auto& th : pool) th.join();
  return states;
}

struct HistState {
  std::vector<std::uint64_t> hist;
};

TailEstimate finish_tail(std::vector<double> grid, std::vector<std::vector<std::uint64_t>> hists,
                         std::uint64_t samples, std::uint64_t seed, double center) {
  TailEstimate est;
  est.t_grid = std::move(grid);
  est.samples = samples;
  est.seed = seed;
  est.center = center;
  const std::size_t m = est.t_grid.size();
  std::vector<std::uint64_t> merged(m, 0);
  for (const auto& h : hists)
    for (std::size_t j = 0; j < h.size(); ++j) merged[j] += h[j];
  // hist[j] counted deviations whose largest reached grid point is j; the
  // tail count at j is the suffix sum.
  est.hits.assign(m, 0);
  std::uint64_t acc = 0;
  for (std::size_t j = m; j-- > 0;) {
    acc += merged[j];
    est.hits[j] = acc;
  }
  est.point.resize(m);
  est.ci_low.resize(m);
  est.ci_high.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    est.point[j] = static_cast<double>(est.hits[j]) / static_cast<double>(samples);
    const auto [lo, hi] = clopper_pearson(est.hits[j], samples, 0.01);
    est.ci_low[j] = lo;
    est.ci_high[j] = hi;
  }
  return est;
}

// Shared tail-counting driver; eval(i, rng) returns the sampled statistic.
template <typename Eval>
TailEstimate tail_driver(std::span<const double> t_grid, std::uint64_t samples,
                         std::uint64_t seed, int threads, double center, Eval&& eval) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  check_grid(t_grid);
  std::vector<double> grid(t_grid.begin(), t_grid.end());
  auto states = run_blocks<HistState>(
      samples, threads, [&](std::uint64_t, std::uint64_t first, std::uint64_t last, HistState& st) {
        if (st.hist.empty()) st.hist.assign(grid.size(), 0);
        for (std::uint64_t i = first; i < last; ++i) {
          RngStream rng = RngStream::substream(seed, i);
          const double dev = std::abs(eval(rng) - center);
          const auto it = std::upper_bound(grid.begin(), grid.end(), dev);
          if (it != grid.begin()) ++st.hist[static_cast<std::size_t>(it - grid.begin()) - 1];
        }
      });
  std::vector<std::vector<std::uint64_t>> hists;
  for (auto& st : states)
    if (!st.hist.empty()) hists.push_back(std::move(st.hist));
  return finish_tail(std::move(grid), std::move(hists), samples, seed, center);
}

}  // namespace

TailEstimate estimate_tail(const Array3& a, StatKind kind, std::span<const double> t_grid,
                           std::uint64_t samples, std::uint64_t seed, int threads) {
  const int n = a.size();
  if (kind == StatKind::t1) {
    return tail_driver(t_grid, samples, seed, threads, mean_t1(a), [&](RngStream& rng) {
      thread_local std::vector<std::int32_t> sigma;
      sigma.resize(n);
      sample_uniform_images(sigma, rng);
      return t1_on(a, sigma);
    });
  }
  if (kind == StatKind::t2) {
    return tail_driver(t_grid, samples, seed, threads, mean_t2(a), [&](RngStream& rng) {
      thread_local std::vector<std::int32_t> sigma, pi;
      sigma.resize(n);
      pi.resize(n);
      sample_uniform_images(sigma, rng);
      sample_uniform_images(pi, rng);
      return t2_on(a, sigma, pi);
    });
  }
  throw std::invalid_argument("cubical arrays support kinds t1 and t2");
}

TailEstimate estimate_tail(const Array2& a, std::span<const double> t_grid,
                           std::uint64_t samples, std::uint64_t seed, int threads) {
  const int n = a.size();
  return tail_driver(t_grid, samples, seed, threads, mean_t3(a), [&](RngStream& rng) {
    thread_local std::vector<std::int32_t> sigma;
    sigma.resize(n);
    sample_uniform_images(sigma, rng);
    return t3_on(a, sigma);
  });
}

PairMoments estimate_pair_moments(const Array3& a, StatKind kind, std::uint64_t samples,
                                  std::uint64_t seed, int threads) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (kind == StatKind::t3) throw std::invalid_argument("pair moments are defined for t1 and t2");
  if (kind == StatKind::t2 && a.size() < 3)
    throw std::invalid_argument("T2 move needs n >= 3");
  const int n = a.size();
  const std::uint64_t nblocks = (samples + kBlock - 1) / kBlock;

  // Per-block partial sums reduced in block order afterwards, so the float
  // result does not depend on the thread count.
  struct Partial {
    double abs = 0.0, sq = 0.0, sum = 0.0;
  };
  std::vector<Partial> partials(nblocks);
  struct Empty {};
  run_blocks<Empty>(samples, threads,
                    [&](std::uint64_t b, std::uint64_t first, std::uint64_t last, Empty&) {
                      thread_local std::vector<std::int32_t> sigma, pi;
                      sigma.resize(n);
                      pi.resize(n);
                      Partial part;
                      for (std::uint64_t i = first; i < last; ++i) {
                        RngStream rng = RngStream::substream(seed, i);
                        double d;
                        if (kind == StatKind::t1) {
                          sample_uniform_images(sigma, rng);
                          const int i1 = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n)));
                          const int i2 = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n)));
                          d = delta_t1(a, sigma, i1, i2);
                        } else {
                          sample_uniform_images(sigma, rng);
                          sample_uniform_images(pi, rng);
                          const IndexTriple t = sample_distinct_triple(n, rng);
                          d = delta_t2(a, sigma, pi, t, rng.coin());
                        }
                        part.abs += std::abs(d);
                        part.sq += d * d;
                        part.sum += d;
                      }
                      partials[b] = part;
                    });

  double abs_sum = 0.0, sq_sum = 0.0, sum = 0.0;
  for (const auto& p : partials) {
    abs_sum += p.abs;
    sq_sum += p.sq;
    sum += p.sum;
  }
  PairMoments m;
  m.samples = samples;
  const double ns = static_cast<double>(samples);
  m.mean_abs_delta = abs_sum / ns;
  m.mean_delta_sq = sq_sum / ns;
  m.mean_delta = sum / ns;
  const double var = std::max(0.0, m.mean_delta_sq - m.mean_delta * m.mean_delta);
  m.se_delta = std::sqrt(var / ns);
  return m;
}

std::pair<double, double> clopper_pearson(std::uint64_t k, std::uint64_t n, double alpha) {
  if (n == 0 || k > n) throw std::invalid_argument("clopper_pearson needs 0 <= k <= n, n >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
  using dist = boost::math::binomial_distribution<double>;
  const double nn = static_cast<double>(n), kk = static_cast<double>(k);
  const double lo = dist::find_lower_bound_on_p(nn, kk, alpha / 2.0, dist::clopper_pearson_exact_interval);
  const double hi = dist::find_upper_bound_on_p(nn, kk, alpha / 2.0, dist::clopper_pearson_exact_interval);
  return {lo, hi};
}

std::vector<double> parse_t_grid(std::string_view text) {
  auto parse_num = [](std::string_view s) {
    double v{};
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
      throw std::invalid_argument("bad t grid number: '" + std::string(s) + "'");
    return v;
  };
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t colon = text.find(':', pos);
    if (colon == std::string_view::npos) {
      parts.push_back(text.substr(pos));
      break;
    }
    parts.push_back(text.substr(pos, colon - pos));
    pos = colon + 1;
  }
  if (parts.size() == 1) return {parse_num(parts[0])};
  if (parts.size() > 3) throw std::invalid_argument("t grid must be 'a:b:step'");
  const double a = parse_num(parts[0]);
  const double b = parse_num(parts[1]);
  const double step = parts.size() == 3 ? parse_num(parts[2]) : 1.0;
  if (!(step > 0.0)) throw std::invalid_argument("t grid step must be > 0");
  if (b < a) throw std::invalid_argument("t grid needs b >= a");
  // Inclusive of a; len chosen so float drift cannot add a point past b.
  const auto len = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  std::vector<double> grid(len);
  for (std::size_t i = 0; i < len; ++i) grid[i] = a + static_cast<double>(i) * step;
  return grid;
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::json metadata(const TailEstimate& est, std::string_view stat_name) {
  return nlohmann::json{{"stat", std::string(stat_name)},
                        {"samples", est.samples},
                        {"seed", est.seed},
                        {"center", est.center},
                        {"alpha", 0.01}};
}

}  // namespace

void write_csv(const TailEstimate& est, std::ostream& out, std::string_view stat_name) {
  out << "# " << metadata(est, stat_name).dump() << '\n';
  out << "t,point,ci_low,ci_high\n";
  for (std::size_t j = 0; j < est.t_grid.size(); ++j)
    out << fmt(est.t_grid[j]) << ',' << fmt(est.point[j]) << ',' << fmt(est.ci_low[j]) << ','
        << fmt(est.ci_high[j]) << '\n';
}

std::string to_json_string(const TailEstimate& est, std::string_view stat_name) {
  nlohmann::json out = metadata(est, stat_name);
  auto& rows = out["rows"] = nlohmann::json::array();
  for (std::size_t j = 0; j < est.t_grid.size(); ++j)
    rows.push_back(nlohmann::json{{"t", est.t_grid[j]},
                                  {"hits", est.hits[j]},
                                  {"point", est.point[j]},
                                  {"ci_low", est.ci_low[j]},
                                  {"ci_high", est.ci_high[j]}});
  return out.dump();
}

}  // namespace permstat
