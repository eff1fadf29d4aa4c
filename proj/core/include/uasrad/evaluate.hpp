#pragma once

// Error statistics, NDVI, one-way ANOVA and the DLS cosine-falloff check.

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uasrad/image.hpp"
#include "uasrad/reflectance.hpp"

namespace uasrad {

enum class Weather { cloudy, partly_cloudy, sunny };
enum class Method { elm1, elm2, aarr };

Weather parse_weather(std::string_view s);
std::string_view to_string(Weather w);
Method parse_method(std::string_view s);
std::string_view to_string(Method m);

struct TargetSample {
  std::string target_id;
  int band_index = 1;
  Weather weather = Weather::sunny;
  int altitude_ft = 375;  // one of 150, 225, 300, 375
  Method method = Method::aarr;
  double true_reflectance = 0.0;
  double estimated_reflectance = 0.0;

  void validate() const;
  double error() const;
};

/// est - truth.
double signed_error(double estimated, double truth) noexcept;

enum class StdKind { population, sample };

struct Describe {
  double mean = 0.0;
  double std_dev = 0.0;
  std::size_t n = 0;
};

/// Mean and standard deviation. Values are summed in sorted order, so the
/// result does not depend on input order. Sample std of one value is 0.
Describe describe(std::span<const double> values, StdKind kind = StdKind::population);

enum class GroupField { band, target, altitude, weather, method };

/// Parses a comma list such as "method,band"; empty means one overall group.
std::vector<GroupField> parse_group_by(std::string_view spec);
std::string_view to_string(GroupField f);

struct GroupKey {
  std::optional<int> band;
  std::optional<std::string> target;
  std::optional<int> altitude_ft;
  std::optional<Weather> weather;
  std::optional<Method> method;

  auto operator<=>(const GroupKey&) const = default;
};

struct ErrorReport {
  GroupKey key;
  double mean_signed = 0.0;
  double std_signed = 0.0;
  double mean_absolute = 0.0;
  double std_absolute = 0.0;
  std::size_t n = 0;
};

/// One report per distinct key, ordered by key.
std::vector<ErrorReport> aggregate(std::span<const TargetSample> samples, std::span<const GroupField> group_by,
                                   StdKind kind = StdKind::population);

std::vector<TargetSample> read_samples_csv(std::istream& in);
std::vector<TargetSample> read_samples_csv(const std::filesystem::path& path);
void write_samples_csv(std::ostream& out, std::span<const TargetSample> samples);

/// Long form: one row per group, grouped columns first.
void write_reports_csv(std::ostream& out, std::span<const ErrorReport> reports,
                       std::span<const GroupField> group_by);
/// Error-type rows by method columns.
void write_method_table_csv(std::ostream& out, std::span<const TargetSample> samples,
                            StdKind kind = StdKind::population);
/// Band rows by method mean/std columns.
void write_band_table_csv(std::ostream& out, std::span<const TargetSample> samples,
                          StdKind kind = StdKind::population);

// ---------------------------------------------------------------------------

class NdviImage : public Plane<double> {
 public:
  NdviImage(std::size_t width, std::size_t height, std::vector<double> pixels, std::size_t zero_denominator);
  /// Pixels where NIR + Red was 0; those are written as 0.
  std::size_t zero_denominator_count() const noexcept { return zero_denominator_; }

 private:
  std::size_t zero_denominator_;
};

double ndvi(double red, double nir) noexcept;
NdviImage ndvi(const ReflectanceImage& red, const ReflectanceImage& nir);

// ---------------------------------------------------------------------------

struct AnovaResult {
  double f = 0.0;
  double p = 1.0;
  double ss_between = 0.0;
  double ss_within = 0.0;
  int df_between = 0;
  int df_within = 0;
};

/// One-way ANOVA. Zero within-group variance gives F = inf, p = 0 when the
/// group means differ; no variance at all gives F = 0, p = 1.
AnovaResult anova_oneway(std::span<const std::vector<double>> groups);

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);
double f_cdf(double f, double d1, double d2);
/// P(F > f).
double f_survival(double f, double d1, double d2);

// ---------------------------------------------------------------------------

struct FalloffMeasurement {
  double angle_deg = 0.0;
  BandVector irradiance{};
};

/// Per-band RMS of measured(theta) - E(0) cos(theta) over the non-zero
/// angles; the 0 deg entry is the reference.
BandVector cosine_falloff_check(std::span<const FalloffMeasurement> measured);

/// Spearman rank correlation with average ranks for ties; NaN when either
/// series is constant.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace uasrad
