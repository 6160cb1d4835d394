#pragma once

#include <string>
#include <vector>

#include "ite/media.hpp"
#include "ite/radial.hpp"

// Dispersion curves mu_m(lambda) = sigma (F_m - F_{a,n,m}) of separable media,
// their events (zero crossings, touches, pole passages, singular points), and
// the counting series built from them.
namespace ite {

enum class EventKind { zero_crossing, zero_touch, pole_passage, singular_point };
enum class Direction { into_negative, out_of_negative, none };
enum class PoleSide { none, plain, a_n, both };

const char* to_string(EventKind k);
const char* to_string(Direction d);
const char* to_string(PoleSide p);

struct EigencurveEvent {
  EventKind kind = EventKind::zero_crossing;
  double lambda = 0.0;
  int mode = 0;
  int degeneracy = 1;
  Direction direction = Direction::none;
  PoleSide pole = PoleSide::none;
  bool flagged = false;  ///< zero coinciding with a pole of the other family
};

struct IteContribution {
  int mode;
  int degeneracy;
  EventKind kind;
};

struct IteRecord {
  double lambda = 0.0;
  int multiplicity = 0;
  std::vector<IteContribution> contributions;
  std::string kind() const;  ///< "regular", "singular" or "mixed"
};

struct ScanOptions {
  double lambda_tol = 1e-9;     ///< root refinement in lambda
  double touch_tol = 1e-7;      ///< |mu| threshold for tangential zeros
  double pole_offset = 1e-6;    ///< relative offset of one-sided pole samples
  double singular_tol = 1e-8;   ///< coincident same-mode poles
  double singular_offset = 1e-4; ///< relative half-width excluded around singular points
  double step_factor = 1.0;     ///< multiplies the default scan step in k
  int extra_modes = 0;          ///< modes scanned beyond the verified cutoff
  int threads = 1;
  CutoffOptions cutoff;
};

struct ScanResult {
  std::vector<EigencurveEvent> events;  ///< sorted by (lambda, mode, kind)
  int mode_cutoff = 0;                  ///< highest mode scanned
  int cutoff_retries = 0;
  std::vector<SpectrumEntry> plain_spectrum;
  std::vector<SpectrumEntry> an_spectrum;
  std::vector<std::string> warnings;
};

/// sigma (F - F_{a,n}) for the mode; PoleError within 1e-10 of a pole of
/// either family.
double dispersion(const SeparableModel& model, const MediumConstants& c, int mode, double lambda);

/// Same without the pole-distance check (hot path of the scans).
double dispersion_unchecked(const SeparableModel& model, const MediumConstants& c, int mode,
                            double lambda);

ScanResult scan_events(const SeparableModel& model, const MediumConstants& c, double alpha,
                       double lambda_max, const ScanOptions& opts = {});

struct InequalityResidual {
  long long nt_slack = 0;    ///< N_T - |n2| - R, must be >= 0
  long long sandwich = 0;    ///< R - |n1 - sigma (N_an - N)|, must be >= 0
  long long bookkeeping = 0; ///< n_minus - n_minus(alpha) - n1 - n2, must be 0
};

struct CountingReport {
  int dimension = 2;
  double alpha = 0.0;
  std::vector<double> grid;
  std::vector<long long> N_T, N, N_an, n_minus, n1, n2, R_sing;
  long long n_minus_alpha = 0;
  MediumConstants constants;
  std::vector<InequalityResidual> residuals;

  bool nt_holds() const;
  bool sandwich_holds() const;
  bool bookkeeping_holds() const;
  double weyl_prediction(std::size_t i) const;
};

/// Geometric grid on (alpha, lambda_max] with the given density, lambda_max
/// included, each point moved at least 1e-7 away from every event.
std::vector<double> default_grid(double alpha, double lambda_max, const ScanResult& scan,
                                 int points_per_decade = 64);

/// Degeneracy of the negative part of P(lambda): sum over modes <= cutoff.
long long negative_count(const SeparableModel& model, const MediumConstants& c, int cutoff,
                         double lambda, int threads = 1);

/// Builds the counting series. n_minus is evaluated independently by sign
/// counting; AccountingMismatch when the bookkeeping identity fails and
/// `strict` is set.
CountingReport assemble_counting(const SeparableModel& model, const MediumConstants& c,
                                 const ScanResult& scan, double alpha,
                                 const std::vector<double>& grid, int threads = 1,
                                 bool strict = true);

struct WeylFit {
  double window_lo = 0.0, window_hi = 0.0;
  double min_ratio = 0.0, mean_ratio = 0.0;
  double slope = 0.0;            ///< log-log slope of N_T
  double n_minus_exponent = 0.0; ///< log-log slope of n_minus (0 if bounded)
  double exponent_bound = 0.0;   ///< d/2 - delta + 0.15
  double epsilon = 0.1;
  bool bound_satisfied = false;
  bool exponent_ok = false;
};

/// Fits over [window_lo, last grid point]; window_lo defaults to a decade
/// below the last point. InsufficientRange when the grid covers less than
/// two decades above alpha.
WeylFit weyl_check(const CountingReport& report, double epsilon = 0.1, double window_lo = 0.0);

struct EstimateSample {
  double lambda;
  double distance;  ///< to the nearest a_n pole over all modes
  bool near_pole;
  double c1;        ///< max over modes of the first normalized ratio
  double c2;
  int c1_mode, c2_mode;
};

struct EstimateSummary {
  std::vector<EstimateSample> samples;
  std::vector<double> decade_edges;  ///< consecutive decades [e_i, e_{i+1})
  std::vector<double> c1_decade_max, c2_decade_max;
  double c1 = 0.0, c2 = 0.0;
  bool decade_stable = false;
};

/// Normalized per-mode remainders of F_{a,n}(lambda) about lambda = 0 on the
/// given grid (moved to keep 1e-3 lambda from a_n poles) plus explicit
/// samples at distance `near_pole_distance` from up to `near_pole_count`
/// poles in range.
EstimateSummary operator_estimate_check(const SeparableModel& model,
                                        const std::vector<double>& lambda_grid, int mode_max,
                                        int near_pole_count = 24, double near_pole_distance = 1e-2);

/// Geometric grid on [lo, hi] with the given density per decade.
std::vector<double> log_grid(double lo, double hi, int points_per_decade);

struct IteRun {
  MediumConstants constants;
  DiscretenessReport discreteness;
  double alpha = 0.0;
  ScanResult scan;
  CountingReport report;
  std::vector<IteRecord> ites;
};

struct FindOptions {
  ScanOptions scan;
  int points_per_decade = 64;
  bool strict_accounting = true;
};

/// Groups zero-type events (crossings, touches, singular points) lying
/// within 1e-8 of each other into ITE records.
std::vector<IteRecord> collect_ites(const std::vector<EigencurveEvent>& events);

/// constants -> alpha -> event scan -> counting report -> ITE list.
IteRun find_ites(const MediumSpec& spec, double lambda_max, const FindOptions& opts = {});

}  // namespace ite
