#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace echoflow::hawkes {

struct Event {
  std::int64_t minute = 0;  // UTC minute
  std::string platform;
};

/// Per-minute counts for K processes, minute 0 = earliest event.
struct EventSeries {
  std::size_t T = 0;
  std::size_t K = 0;
  std::int64_t t0 = 0;
  std::vector<std::string> platform_names;
  std::vector<long long> counts;  // row-major T x K

  long long s(std::size_t t, std::size_t k) const { return counts[t * K + k]; }
  long long& s(std::size_t t, std::size_t k) { return counts[t * K + k]; }
  long long total(std::size_t k) const;
  long long total_events() const;
};

/// Bins events over the span first..last minute. With explicit platform
/// names, events on unlisted platforms are an error; otherwise the
/// sorted distinct platforms define the processes. Empty input throws.
EventSeries build_event_series(const std::vector<Event>& events,
                               const std::vector<std::string>& platform_names = {});

enum class LagFamily {
  Geometric,  // fixed pmf, success chosen so the untruncated mean is delta_t_max/4
  Learned,    // per-pair lag histogram estimated with the weights
};

struct LagConfig {
  LagFamily family = LagFamily::Geometric;
  /// Geometric success probability; unset -> 4/delta_t_max.
  std::optional<double> success = std::nullopt;
};

/// Excitation: an event on process k adds expected W[k][k2] events on
/// process k2, spread over lags 1..delta_t_max by the pmf G[k][k2].
struct HawkesModel {
  std::size_t K = 0;
  int delta_t_max = 0;
  std::vector<double> lambda0;                       // background rates, events/minute
  std::vector<std::vector<double>> W;                // W[source][target]
  std::vector<std::vector<std::vector<double>>> G;   // G[source][target][lag-1]
  std::vector<std::string> platform_names;
};

/// Truncated geometric lag pmf over 1..delta_t_max.
std::vector<double> geometric_lag_pmf(int delta_t_max, double success);

HawkesModel make_model(std::vector<double> lambda0, std::vector<std::vector<double>> W,
                       int delta_t_max, const LagConfig& lag = {},
                       std::vector<std::string> platform_names = {});

/// Largest-eigenvalue magnitude of the non-negative matrix W.
double spectral_radius(const std::vector<std::vector<double>>& W);

/// lambda_{t,k}: background plus excitation from counts in the
/// preceding delta_t_max minutes.
double intensity(const HawkesModel& model, const EventSeries& series, std::size_t t,
                 std::size_t k);

struct SimulationResult {
  EventSeries series;
  /// children[src][dst]: events on dst generated (within the horizon)
  /// by events on src. Dividing by the source's event count estimates
  /// W[src][dst].
  std::vector<std::vector<long long>> children;
  std::vector<long long> background_events;
};

/// Sequential thinning-free sampler: every bin's count is the sum of a
/// background Poisson draw and independent Poisson child draws from
/// each earlier event bin. Deterministic for a fixed seed. Throws when
/// spectral_radius(W) >= 1.
SimulationResult simulate(const HawkesModel& model, std::size_t T, std::uint64_t seed);

struct FitOptions {
  int max_iterations = 500;
  double relative_tolerance = 1e-8;  // on log-likelihood change
  LagConfig lag = {};
};

struct FitResult {
  HawkesModel model;
  bool converged = false;
  int iterations = 0;
  double log_likelihood = 0.0;
  std::vector<double> ll_trajectory;  // one entry per EM iteration
};

/// EM over latent parent attributions. The M-step uses exact
/// edge-corrected normalizers, so the log-likelihood never decreases
/// (violations throw std::logic_error). Processes with zero events get
/// zero background and zero weight row/column.
FitResult fit(const EventSeries& series, int delta_t_max, std::uint64_t seed,
              const FitOptions& options = {});

/// Poisson log-likelihood of the series under the model, including the
/// log s! terms.
double log_likelihood(const HawkesModel& model, const EventSeries& series);

struct InfluenceSummary {
  std::size_t K = 0;
  int delta_t_max = 0;
  std::size_t image_count = 0;
  std::vector<std::vector<double>> mean_W;
  std::vector<std::string> platform_names;
};

/// Entry-wise mean of fitted weight matrices; all models must agree on
/// K and delta_t_max. Empty input throws.
InfluenceSummary mean_weight_matrix(const std::vector<HawkesModel>& models);

/// Keeps only images with at least one event on every listed platform.
std::map<std::string, std::vector<Event>> filter_multi_platform(
    const std::map<std::string, std::vector<Event>>& events_by_image,
    const std::vector<std::string>& platform_names);

/// events.csv rows: image_id,platform,utc_minute.
std::map<std::string, std::vector<Event>> load_events(const std::string& path);
void save_events(const std::map<std::string, std::vector<Event>>& events_by_image,
                 const std::string& path);

}  // namespace echoflow::hawkes
