#include "echoflow/hawkes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

#include "echoflow/io_util.hpp"

namespace echoflow::hawkes {
namespace {

double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Knuth's product method, split for large means so the product stays
/// in range. Exact Poisson sampling either way.
long long draw_poisson(double mean, std::mt19937_64& rng) {
  if (mean <= 0) return 0;
  if (mean > 30.0) {
    long long splits = static_cast<long long>(mean / 30.0) + 1;
    long long sum = 0;
    for (long long i = 0; i < splits; ++i) sum += draw_poisson(mean / splits, rng);
    return sum;
  }
  double limit = std::exp(-mean);
  double p = 1.0;
  long long k = 0;
  do {
    ++k;
    p *= next_unit(rng);
  } while (p > limit);
  return k - 1;
}

void validate_model(const HawkesModel& m) {
  if (m.K == 0) throw std::invalid_argument("hawkes model: K must be positive");
  if (m.delta_t_max < 1) throw std::invalid_argument("hawkes model: delta_t_max must be >= 1");
  if (m.lambda0.size() != m.K || m.W.size() != m.K || m.G.size() != m.K)
    throw std::invalid_argument("hawkes model: dimension mismatch");
  for (double l : m.lambda0)
    if (l < 0) throw std::invalid_argument("hawkes model: negative background rate");
  for (std::size_t i = 0; i < m.K; ++i) {
    if (m.W[i].size() != m.K || m.G[i].size() != m.K)
      throw std::invalid_argument("hawkes model: dimension mismatch");
    for (std::size_t j = 0; j < m.K; ++j) {
      if (m.W[i][j] < 0) throw std::invalid_argument("hawkes model: negative weight");
      if (m.G[i][j].size() != static_cast<std::size_t>(m.delta_t_max))
        throw std::invalid_argument("hawkes model: lag pmf length mismatch");
      double sum = 0;
      for (double g : m.G[i][j]) {
        if (g < 0) throw std::invalid_argument("hawkes model: negative lag mass");
        sum += g;
      }
      if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("hawkes model: lag pmf does not sum to 1");
    }
  }
}

}  // namespace

long long EventSeries::total(std::size_t k) const {
  long long sum = 0;
  for (std::size_t t = 0; t < T; ++t) sum += s(t, k);
  return sum;
}

long long EventSeries::total_events() const {
  long long sum = 0;
  for (long long c : counts) sum += c;
  return sum;
}

EventSeries build_event_series(const std::vector<Event>& events,
                               const std::vector<std::string>& platform_names) {
  if (events.empty()) throw std::invalid_argument("build_event_series: no events");

  std::vector<std::string> names = platform_names;
  if (names.empty()) {
    for (const Event& e : events) names.push_back(e.platform);
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = i;

  std::int64_t lo = events.front().minute, hi = events.front().minute;
  for (const Event& e : events) {
    lo = std::min(lo, e.minute);
    hi = std::max(hi, e.minute);
  }

  EventSeries series;
  series.K = names.size();
  series.T = static_cast<std::size_t>(hi - lo + 1);
  series.t0 = lo;
  series.platform_names = std::move(names);
  series.counts.assign(series.T * series.K, 0);
  for (const Event& e : events) {
    auto it = index.find(e.platform);
    if (it == index.end())
      throw std::invalid_argument("build_event_series: unlisted platform " + e.platform);
    ++series.s(static_cast<std::size_t>(e.minute - lo), it->second);
  }
  return series;
}

std::vector<double> geometric_lag_pmf(int delta_t_max, double success) {
  if (delta_t_max < 1) throw std::invalid_argument("lag pmf: delta_t_max must be >= 1");
  if (!(success > 0) || !(success < 1))
    throw std::invalid_argument("lag pmf: success must lie in (0,1)");
  std::vector<double> pmf(delta_t_max);
  double mass = success, total = 0;
  for (int d = 0; d < delta_t_max; ++d) {
    pmf[d] = mass;
    total += mass;
    mass *= 1.0 - success;
  }
  for (double& g : pmf) g /= total;
  return pmf;
}

HawkesModel make_model(std::vector<double> lambda0, std::vector<std::vector<double>> W,
                       int delta_t_max, const LagConfig& lag,
                       std::vector<std::string> platform_names) {
  HawkesModel m;
  m.K = lambda0.size();
  m.delta_t_max = delta_t_max;
  m.lambda0 = std::move(lambda0);
  m.W = std::move(W);
  if (platform_names.empty())
    for (std::size_t k = 0; k < m.K; ++k) platform_names.push_back("p" + std::to_string(k));
  m.platform_names = std::move(platform_names);

  double success = lag.success.value_or(std::min(4.0 / delta_t_max, 0.5));
  std::vector<double> pmf = geometric_lag_pmf(delta_t_max, success);
  m.G.assign(m.K, std::vector<std::vector<double>>(m.K, pmf));
  validate_model(m);
  return m;
}

double spectral_radius(const std::vector<std::vector<double>>& W) {
  const std::size_t k = W.size();
  if (k == 0) return 0;
  std::vector<double> v(k, 1.0);
  double radius = 0;
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<double> next(k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) next[i] += W[i][j] * v[j];
    double norm = 0;
    for (double x : next) norm = std::max(norm, std::abs(x));
    if (norm == 0) return 0;
    for (double& x : next) x /= norm;
    v = std::move(next);
    radius = norm;
  }
  return radius;
}

double intensity(const HawkesModel& model, const EventSeries& series, std::size_t t,
                 std::size_t k) {
  double rate = model.lambda0[k];
  std::size_t max_d = std::min<std::size_t>(model.delta_t_max, t);
  for (std::size_t src = 0; src < model.K; ++src) {
    double w = model.W[src][k];
    if (w == 0) continue;
    const std::vector<double>& pmf = model.G[src][k];
    for (std::size_t d = 1; d <= max_d; ++d) {
      long long count = series.s(t - d, src);
      if (count > 0) rate += count * w * pmf[d - 1];
    }
  }
  return rate;
}

SimulationResult simulate(const HawkesModel& model, std::size_t T, std::uint64_t seed) {
  validate_model(model);
  if (T == 0) throw std::invalid_argument("simulate: T must be positive");
  double radius = spectral_radius(model.W);
  if (radius >= 1.0)
    throw std::invalid_argument("simulate: weight matrix is unstable (spectral radius " +
                                std::to_string(radius) + ")");

  SimulationResult result;
  EventSeries& series = result.series;
  series.T = T;
  series.K = model.K;
  series.t0 = 0;
  series.platform_names = model.platform_names;
  series.counts.assign(T * model.K, 0);
  result.children.assign(model.K, std::vector<long long>(model.K, 0));
  result.background_events.assign(model.K, 0);

  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < T; ++t) {
    // Background arrivals join children already injected by the past.
    for (std::size_t k = 0; k < model.K; ++k) {
      long long bg = draw_poisson(model.lambda0[k], rng);
      result.background_events[k] += bg;
      series.s(t, k) += bg;
    }
    // Each bin's final count then spawns offspring further ahead.
    for (std::size_t src = 0; src < model.K; ++src) {
      long long parents = series.s(t, src);
      if (parents == 0) continue;
      for (std::size_t dst = 0; dst < model.K; ++dst) {
        double w = model.W[src][dst];
        if (w == 0) continue;
        const std::vector<double>& pmf = model.G[src][dst];
        for (int d = 1; d <= model.delta_t_max; ++d) {
          if (t + d >= T) break;
          long long kids = draw_poisson(parents * w * pmf[d - 1], rng);
          if (kids > 0) {
            series.s(t + d, dst) += kids;
            result.children[src][dst] += kids;
          }
        }
      }
    }
  }
  return result;
}

double log_likelihood(const HawkesModel& model, const EventSeries& series) {
  double ll = 0;
  for (std::size_t t = 0; t < series.T; ++t) {
    for (std::size_t k = 0; k < series.K; ++k) {
      double rate = intensity(model, series, t, k);
      long long count = series.s(t, k);
      if (count > 0) {
        if (rate <= 0) return -std::numeric_limits<double>::infinity();
        ll += count * std::log(rate) - std::lgamma(static_cast<double>(count) + 1.0);
      }
      ll -= rate;
    }
  }
  return ll;
}

FitResult fit(const EventSeries& series, int delta_t_max, std::uint64_t seed,
              const FitOptions& options) {
  if (delta_t_max < 1) throw std::invalid_argument("fit: delta_t_max must be >= 1");
  const std::size_t K = series.K;
  const std::size_t T = series.T;
  const std::size_t D = static_cast<std::size_t>(delta_t_max);

  std::vector<long long> totals(K);
  for (std::size_t k = 0; k < K; ++k) totals[k] = series.total(k);

  // Event bins once; EM cost scales with them, not with T.
  struct Bin {
    std::size_t t, k;
    long long count;
  };
  std::vector<Bin> bins;
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t k = 0; k < K; ++k)
      if (series.s(t, k) > 0) bins.push_back({t, k, series.s(t, k)});

  const bool learned = options.lag.family == LagFamily::Learned;
  double success = options.lag.success.value_or(std::min(4.0 / delta_t_max, 0.5));
  std::vector<double> base_pmf = geometric_lag_pmf(delta_t_max, success);

  HawkesModel model;
  model.K = K;
  model.delta_t_max = delta_t_max;
  model.platform_names = series.platform_names;
  model.G.assign(K, std::vector<std::vector<double>>(K, base_pmf));
  model.lambda0.assign(K, 0.0);
  model.W.assign(K, std::vector<double>(K, 0.0));

  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < K; ++k) {
    if (totals[k] == 0) continue;
    model.lambda0[k] =
        0.5 * static_cast<double>(totals[k]) / static_cast<double>(T) * (0.9 + 0.2 * next_unit(rng));
    for (std::size_t src = 0; src < K; ++src)
      if (totals[src] > 0) model.W[src][k] = 0.05 + 0.1 * next_unit(rng);
  }

  // How much lag mass a source bin at t' can spend inside the horizon:
  // cum[m] = sum of the first min(m, D) pmf entries.
  auto cumulative = [&](const std::vector<double>& pmf) {
    std::vector<double> cum(D + 1, 0.0);
    for (std::size_t d = 1; d <= D; ++d) cum[d] = cum[d - 1] + pmf[d - 1];
    return cum;
  };

  // B[src][dst] = sum_t' s(t',src) * cum(min(D, T-1-t')), the exact
  // exposure normalizer for W. Depends on G only.
  auto compute_B = [&](std::vector<std::vector<double>>& B) {
    for (std::size_t src = 0; src < K; ++src) {
      for (std::size_t dst = 0; dst < K; ++dst) {
        std::vector<double> cum = cumulative(model.G[src][dst]);
        double full = cum[D];
        double b = 0;
        // All bins except the final D-1 see the full mass.
        std::size_t edge_start = T > D ? T - D : 0;
        long long bulk = 0;
        for (const Bin& bin : bins)
          if (bin.k == src && bin.t < edge_start) bulk += bin.count;
        b += bulk * full;
        for (const Bin& bin : bins) {
          if (bin.k != src || bin.t < edge_start) continue;
          std::size_t room = T - 1 - bin.t;
          b += bin.count * cum[std::min(room, D)];
        }
        B[src][dst] = b;
      }
    }
  };

  std::vector<std::vector<double>> B(K, std::vector<double>(K, 0.0));
  compute_B(B);

  // Constant part of the log-likelihood.
  double const_term = 0;
  for (const Bin& bin : bins) const_term -= std::lgamma(static_cast<double>(bin.count) + 1.0);

  // suffix_counts[k][t] = events of process k at times >= t; O(1)
  // exposure sums for the learned-lag M-step.
  std::vector<std::vector<long long>> suffix;
  if (learned) {
    suffix.assign(K, std::vector<long long>(T + 1, 0));
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t t = T; t-- > 0;)
        suffix[k][t] = suffix[k][t + 1] + series.s(t, k);
  }

  FitResult result;
  double prev_ll = -std::numeric_limits<double>::infinity();
  std::vector<double> bg_resp(K);
  std::vector<std::vector<double>> A(K, std::vector<double>(K));
  std::vector<std::vector<std::vector<double>>> lagA;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    for (double& r : bg_resp) r = 0;
    for (auto& row : A)
      for (double& a : row) a = 0;
    if (learned) lagA.assign(K, std::vector<std::vector<double>>(K, std::vector<double>(D, 0.0)));

    double ll = const_term;
    for (std::size_t src = 0; src < K; ++src)
      for (std::size_t dst = 0; dst < K; ++dst) ll -= model.W[src][dst] * B[src][dst];
    for (std::size_t k = 0; k < K; ++k) ll -= model.lambda0[k] * static_cast<double>(T);

    // E-step: split each bin's events among background and candidate
    // parent bins in proportion to their rate contributions.
    for (const Bin& bin : bins) {
      double rate = model.lambda0[bin.k];
      std::size_t max_d = std::min<std::size_t>(D, bin.t);
      for (std::size_t src = 0; src < K; ++src) {
        double w = model.W[src][bin.k];
        if (w == 0) continue;
        const std::vector<double>& pmf = model.G[src][bin.k];
        for (std::size_t d = 1; d <= max_d; ++d) {
          long long parents = series.s(bin.t - d, src);
          if (parents > 0) rate += parents * w * pmf[d - 1];
        }
      }
      if (rate <= 0) continue;  // zero-rate bin with events cannot occur under this model
      ll += bin.count * std::log(rate);

      double scale = static_cast<double>(bin.count) / rate;
      bg_resp[bin.k] += model.lambda0[bin.k] * scale;
      for (std::size_t src = 0; src < K; ++src) {
        double w = model.W[src][bin.k];
        if (w == 0) continue;
        const std::vector<double>& pmf = model.G[src][bin.k];
        for (std::size_t d = 1; d <= max_d; ++d) {
          long long parents = series.s(bin.t - d, src);
          if (parents == 0) continue;
          double resp = parents * w * pmf[d - 1] * scale;
          A[src][bin.k] += resp;
          if (learned) lagA[src][bin.k][d - 1] += resp;
        }
      }
    }

    result.ll_trajectory.push_back(ll);
    if (iter > 0 && ll < prev_ll - 1e-7 * (1.0 + std::abs(prev_ll)))
      throw std::logic_error("hawkes fit: log-likelihood decreased");

    // M-step.
    for (std::size_t k = 0; k < K; ++k)
      model.lambda0[k] = totals[k] == 0 ? 0.0 : bg_resp[k] / static_cast<double>(T);
    if (learned) {
      // Each lag's impulse mass has its own closed-form optimum
      // A_d / exposure_d; weights and pmf are read off the sum.
      for (std::size_t src = 0; src < K; ++src) {
        for (std::size_t dst = 0; dst < K; ++dst) {
          if (totals[src] == 0 || totals[dst] == 0) {
            model.W[src][dst] = 0;
            continue;
          }
          double w_total = 0;
          std::vector<double> h(D, 0.0);
          for (std::size_t d = 1; d <= D; ++d) {
            // Source events with room for a lag-d child: t' <= T-1-d.
            long long exposure = d < T ? suffix[src][0] - suffix[src][T - d] : 0;
            if (exposure > 0) h[d - 1] = lagA[src][dst][d - 1] / static_cast<double>(exposure);
            w_total += h[d - 1];
          }
          model.W[src][dst] = w_total;
          if (w_total > 0)
            for (std::size_t d = 0; d < D; ++d) model.G[src][dst][d] = h[d] / w_total;
          else
            model.G[src][dst] = base_pmf;
        }
      }
      compute_B(B);
    } else {
      for (std::size_t src = 0; src < K; ++src)
        for (std::size_t dst = 0; dst < K; ++dst)
          model.W[src][dst] =
              (totals[src] == 0 || totals[dst] == 0 || B[src][dst] <= 0)
                  ? 0.0
                  : A[src][dst] / B[src][dst];
    }

    result.iterations = iter + 1;
    if (iter > 0) {
      double change = std::abs(ll - prev_ll) / (1.0 + std::abs(prev_ll));
      if (change < options.relative_tolerance) {
        result.converged = true;
        prev_ll = ll;
        break;
      }
    }
    prev_ll = ll;
  }

  result.model = std::move(model);
  result.log_likelihood = prev_ll;
  return result;
}

InfluenceSummary mean_weight_matrix(const std::vector<HawkesModel>& models) {
  if (models.empty()) throw std::invalid_argument("mean_weight_matrix: no models");
  const std::size_t K = models.front().K;
  const int dt = models.front().delta_t_max;
  InfluenceSummary summary;
  summary.K = K;
  summary.delta_t_max = dt;
  summary.image_count = models.size();
  summary.platform_names = models.front().platform_names;
  summary.mean_W.assign(K, std::vector<double>(K, 0.0));
  for (const HawkesModel& m : models) {
    if (m.K != K || m.delta_t_max != dt)
      throw std::invalid_argument("mean_weight_matrix: mixed model shapes");
    for (std::size_t i = 0; i < K; ++i)
      for (std::size_t j = 0; j < K; ++j) summary.mean_W[i][j] += m.W[i][j];
  }
  for (auto& row : summary.mean_W)
    for (double& x : row) x /= static_cast<double>(models.size());
  return summary;
}

std::map<std::string, std::vector<Event>> filter_multi_platform(
    const std::map<std::string, std::vector<Event>>& events_by_image,
    const std::vector<std::string>& platform_names) {
  std::map<std::string, std::vector<Event>> kept;
  for (const auto& [image, events] : events_by_image) {
    std::set<std::string> present;
    for (const Event& e : events) present.insert(e.platform);
    bool all = true;
    for (const std::string& p : platform_names)
      if (!present.count(p)) {
        all = false;
        break;
      }
    if (all) kept[image] = events;
  }
  return kept;
}

std::map<std::string, std::vector<Event>> load_events(const std::string& path) {
  std::map<std::string, std::vector<Event>> out;
  bool first = true;
  for (const std::string& line : io::read_lines(path)) {
    if (line.empty()) continue;
    std::vector<std::string> cells = io::split_csv_line(line);
    if (first) {
      first = false;
      if (cells.size() == 3 && cells[0] == "image_id") continue;
    }
    if (cells.size() != 3) throw std::runtime_error("bad events row: " + line);
    Event e;
    e.platform = cells[1];
    try {
      e.minute = std::stoll(cells[2]);
    } catch (const std::exception&) {
      throw std::runtime_error("bad minute in events row: " + line);
    }
    out[cells[0]].push_back(e);
  }
  return out;
}

void save_events(const std::map<std::string, std::vector<Event>>& events_by_image,
                 const std::string& path) {
  std::string out = "image_id,platform,utc_minute\n";
  for (const auto& [image, events] : events_by_image) {
    for (const Event& e : events) {
      out += io::join_csv_line({image, e.platform, std::to_string(e.minute)});
      out += '\n';
    }
  }
  io::write_file(path, out);
}

}  // namespace echoflow::hawkes
