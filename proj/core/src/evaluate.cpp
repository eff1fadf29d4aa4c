#include "uasrad/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>

#include "uasrad/error.hpp"
#include "uasrad/rsr.hpp"
#include "uasrad/text.hpp"

namespace uasrad {

Weather parse_weather(std::string_view s) {
  const auto v = text::to_lower(text::trim(s));
  if (v == "cloudy") return Weather::cloudy;
  if (v == "partly-cloudy" || v == "partly_cloudy") return Weather::partly_cloudy;
  if (v == "sunny") return Weather::sunny;
  throw InvalidArgument("unknown weather '" + std::string(s) + "'");
}

std::string_view to_string(Weather w) {
  switch (w) {
    case Weather::cloudy: return "cloudy";
    case Weather::partly_cloudy: return "partly-cloudy";
    case Weather::sunny: return "sunny";
  }
  return "?";
}

Method parse_method(std::string_view s) {
  const auto v = text::to_lower(text::trim(s));
  if (v == "elm1") return Method::elm1;
  if (v == "elm2") return Method::elm2;
  if (v == "aarr") return Method::aarr;
  throw ConfigError("unknown method '" + std::string(s) + "' (expected elm1, elm2 or aarr)");
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::elm1: return "elm1";
    case Method::elm2: return "elm2";
    case Method::aarr: return "aarr";
  }
  return "?";
}

void TargetSample::validate() const {
  if (band_index < 1 || band_index > kBandCount) throw InvalidArgument("sample band must be 1..5");
  if (altitude_ft != 150 && altitude_ft != 225 && altitude_ft != 300 && altitude_ft != 375) {
    throw InvalidArgument("sample altitude must be 150, 225, 300 or 375 ft");
  }
  if (!std::isfinite(true_reflectance) || !std::isfinite(estimated_reflectance)) {
    throw InvalidArgument("sample reflectances must be finite");
  }
}

double TargetSample::error() const { return signed_error(estimated_reflectance, true_reflectance); }

double signed_error(double estimated, double truth) noexcept { return estimated - truth; }

Describe describe(std::span<const double> values, StdKind kind) {
  Describe d;
  d.n = values.size();
  if (values.empty()) return d;
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  d.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  std::vector<double> sq(v.size());
  std::transform(v.begin(), v.end(), sq.begin(), [&](double x) { return (x - d.mean) * (x - d.mean); });
  std::sort(sq.begin(), sq.end());
  const double ss = std::accumulate(sq.begin(), sq.end(), 0.0);
  if (kind == StdKind::sample) {
    d.std_dev = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  } else {
    d.std_dev = std::sqrt(ss / n);
  }
  return d;
}

std::vector<GroupField> parse_group_by(std::string_view spec) {
  std::vector<GroupField> out;
  for (const auto& raw : text::split(spec, ',')) {
    const auto f = text::to_lower(text::trim(raw));
    if (f.empty()) continue;
    GroupField g;
    if (f == "band") {
      g = GroupField::band;
    } else if (f == "target" || f == "target_id") {
      g = GroupField::target;
    } else if (f == "altitude" || f == "altitude_ft") {
      g = GroupField::altitude;
    } else if (f == "weather") {
      g = GroupField::weather;
    } else if (f == "method") {
      g = GroupField::method;
    } else {
      throw ConfigError("unknown group-by field '" + f + "'");
    }
    if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
  }
  return out;
}

std::string_view to_string(GroupField f) {
  switch (f) {
    case GroupField::band: return "band";
    case GroupField::target: return "target";
    case GroupField::altitude: return "altitude_ft";
    case GroupField::weather: return "weather";
    case GroupField::method: return "method";
  }
  return "?";
}

namespace {

GroupKey key_for(const TargetSample& s, std::span<const GroupField> group_by) {
  GroupKey k;
  for (auto f : group_by) {
    switch (f) {
      case GroupField::band: k.band = s.band_index; break;
      case GroupField::target: k.target = s.target_id; break;
      case GroupField::altitude: k.altitude_ft = s.altitude_ft; break;
      case GroupField::weather: k.weather = s.weather; break;
      case GroupField::method: k.method = s.method; break;
    }
  }
  return k;
}

ErrorReport report_for(GroupKey key, const std::vector<double>& errors, StdKind kind) {
  std::vector<double> abs_errors(errors.size());
  std::transform(errors.begin(), errors.end(), abs_errors.begin(), [](double e) { return std::abs(e); });
  const auto s = describe(errors, kind);
  const auto a = describe(abs_errors, kind);
  return {std::move(key), s.mean, s.std_dev, a.mean, a.std_dev, s.n};
}

const char* kSampleHeader =
    "target_id,band,weather,altitude_ft,method,true_reflectance,estimated_reflectance";

}  // namespace

std::vector<ErrorReport> aggregate(std::span<const TargetSample> samples, std::span<const GroupField> group_by,
                                   StdKind kind) {
  if (samples.empty()) throw InvalidArgument("aggregate: no samples");
  std::map<GroupKey, std::vector<double>> groups;
  for (const auto& s : samples) {
    s.validate();
    groups[key_for(s, group_by)].push_back(s.error());
  }
  std::vector<ErrorReport> out;
  out.reserve(groups.size());
  for (auto& [key, errors] : groups) out.push_back(report_for(key, errors, kind));
  return out;
}

std::vector<TargetSample> read_samples_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<TargetSample> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto f = text::split(t, ',');
    if (!header_seen) {
      header_seen = true;
      if (f.size() != 7 || text::trim(f[0]) != "target_id") {
        throw FormatError(std::string("samples: expected header '") + kSampleHeader + "'", line_no);
      }
      continue;
    }
    if (f.size() != 7) throw FormatError("samples: expected 7 fields", line_no);
    TargetSample s;
    s.target_id = std::string(text::trim(f[0]));
    try {
      s.band_index = static_cast<int>(text::parse_double(f[1], line_no));
      s.weather = parse_weather(f[2]);
      s.altitude_ft = static_cast<int>(text::parse_double(f[3], line_no));
      s.method = parse_method(f[4]);
      s.true_reflectance = text::parse_double(f[5], line_no);
      s.estimated_reflectance = text::parse_double(f[6], line_no);
      s.validate();
    } catch (const FormatError&) {
      throw;
    } catch (const Error& e) {
      throw FormatError(std::string("samples: ") + e.what(), line_no);
    }
    out.push_back(std::move(s));
  }
  if (!header_seen) throw FormatError("samples: empty file", line_no);
  return out;
}

std::vector<TargetSample> read_samples_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return read_samples_csv(in);
}

void write_samples_csv(std::ostream& out, std::span<const TargetSample> samples) {
  out << kSampleHeader << '\n';
  for (const auto& s : samples) {
    out << s.target_id << ',' << s.band_index << ',' << to_string(s.weather) << ',' << s.altitude_ft << ','
        << to_string(s.method) << ',' << text::format_double(s.true_reflectance) << ','
        << text::format_double(s.estimated_reflectance) << '\n';
  }
}

void write_reports_csv(std::ostream& out, std::span<const ErrorReport> reports,
                       std::span<const GroupField> group_by) {
  for (auto f : group_by) out << to_string(f) << ',';
  out << "mean_signed,std_signed,mean_absolute,std_absolute,n\n";
  for (const auto& r : reports) {
    for (auto f : group_by) {
      switch (f) {
        case GroupField::band: out << kCameraBands[*r.key.band - 1].name; break;
        case GroupField::target: out << *r.key.target; break;
        case GroupField::altitude: out << *r.key.altitude_ft; break;
        case GroupField::weather: out << to_string(*r.key.weather); break;
        case GroupField::method: out << to_string(*r.key.method); break;
      }
      out << ',';
    }
    out << text::format_double(r.mean_signed) << ',' << text::format_double(r.std_signed) << ','
        << text::format_double(r.mean_absolute) << ',' << text::format_double(r.std_absolute) << ',' << r.n
        << '\n';
  }
}

void write_method_table_csv(std::ostream& out, std::span<const TargetSample> samples, StdKind kind) {
  const GroupField by[] = {GroupField::method};
  const auto reports = aggregate(samples, by, kind);
  out << "error";
  for (const auto& r : reports) out << ',' << to_string(*r.key.method);
  out << '\n';
  const auto row = [&](const char* name, double ErrorReport::*field) {
    out << name;
    for (const auto& r : reports) out << ',' << text::format_double(r.*field);
    out << '\n';
  };
  row("mean_signed", &ErrorReport::mean_signed);
  row("std_signed", &ErrorReport::std_signed);
  row("mean_absolute", &ErrorReport::mean_absolute);
  row("std_absolute", &ErrorReport::std_absolute);
}

void write_band_table_csv(std::ostream& out, std::span<const TargetSample> samples, StdKind kind) {
  const GroupField by[] = {GroupField::band, GroupField::method};
  const auto reports = aggregate(samples, by, kind);
  std::vector<Method> methods;
  for (const auto& r : reports)
    if (std::find(methods.begin(), methods.end(), *r.key.method) == methods.end()) methods.push_back(*r.key.method);
  std::sort(methods.begin(), methods.end());
  out << "band";
  for (auto m : methods) out << ',' << to_string(m) << "_mean," << to_string(m) << "_std";
  out << '\n';
  std::map<int, std::map<Method, const ErrorReport*>> table;
  for (const auto& r : reports) table[*r.key.band][*r.key.method] = &r;
  for (const auto& [band, cells] : table) {
    out << kCameraBands[band - 1].name;
    for (auto m : methods) {
      const auto it = cells.find(m);
      if (it == cells.end()) {
        out << ",,";
      } else {
        out << ',' << text::format_double(it->second->mean_signed) << ','
            << text::format_double(it->second->std_signed);
      }
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------

NdviImage::NdviImage(std::size_t width, std::size_t height, std::vector<double> pixels,
                     std::size_t zero_denominator)
    : Plane<double>(width, height, 0, std::move(pixels)), zero_denominator_(zero_denominator) {}

double ndvi(double red, double nir) noexcept {
  const double den = nir + red;
  return den == 0.0 ? 0.0 : (nir - red) / den;
}

NdviImage ndvi(const ReflectanceImage& red, const ReflectanceImage& nir) {
  if (!red.same_shape(nir)) {
    throw DimensionError("ndvi: red is " + std::to_string(red.width()) + "x" + std::to_string(red.height()) +
                         ", nir is " + std::to_string(nir.width()) + "x" + std::to_string(nir.height()));
  }
  const auto r = red.pixels();
  const auto n = nir.pixels();
  std::vector<double> out(r.size());
  std::size_t zero = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] + n[i] == 0.0) ++zero;
    out[i] = ndvi(r[i], n[i]);
  }
  return NdviImage(red.width(), red.height(), std::move(out), zero);
}

// ---------------------------------------------------------------------------

AnovaResult anova_oneway(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw InvalidArgument("anova: need at least 2 groups");
  std::size_t total = 0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw InvalidArgument("anova: every group needs at least 2 samples");
    for (double v : g)
      if (!std::isfinite(v)) throw InvalidArgument("anova: non-finite sample");
    total += g.size();
  }
  AnovaResult r;
  r.df_between = static_cast<int>(groups.size()) - 1;
  r.df_within = static_cast<int>(total - groups.size());

  std::vector<double> means;
  double grand = 0.0;
  for (const auto& g : groups) {
    const double m = describe(g).mean;
    means.push_back(m);
    grand += m * static_cast<double>(g.size());
  }
  grand /= static_cast<double>(total);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const double d = means[i] - grand;
    r.ss_between += static_cast<double>(groups[i].size()) * d * d;
    for (double v : groups[i]) r.ss_within += (v - means[i]) * (v - means[i]);
  }
  if (r.ss_between == 0.0) {
    r.f = 0.0;
    r.p = 1.0;
  } else if (r.ss_within == 0.0) {
    r.f = std::numeric_limits<double>::infinity();
    r.p = 0.0;
  } else {
    r.f = (r.ss_between / r.df_between) / (r.ss_within / r.df_within);
    r.p = f_survival(r.f, r.df_between, r.df_within);
  }
  return r;
}

namespace {

// Continued fraction for I_x(a, b), modified Lentz.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw Error("incomplete beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("incomplete beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("incomplete beta: x must be in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double f_cdf(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw InvalidArgument("F distribution: degrees of freedom must be positive");
  if (std::isnan(f)) throw InvalidArgument("F distribution: NaN statistic");
  if (f <= 0.0) return 0.0;
  if (std::isinf(f)) return 1.0;
  return incomplete_beta(d1 / 2.0, d2 / 2.0, d1 * f / (d1 * f + d2));
}

double f_survival(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw InvalidArgument("F distribution: degrees of freedom must be positive");
  if (std::isnan(f)) throw InvalidArgument("F distribution: NaN statistic");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

// ---------------------------------------------------------------------------

BandVector cosine_falloff_check(std::span<const FalloffMeasurement> measured) {
  const auto ref = std::find_if(measured.begin(), measured.end(),
                                [](const FalloffMeasurement& m) { return m.angle_deg == 0.0; });
  if (ref == measured.end()) throw InvalidArgument("cosine falloff: no 0 degree reference measurement");
  BandVector sum{};
  std::size_t n = 0;
  for (const auto& m : measured) {
    if (m.angle_deg == 0.0) continue;
    if (!(m.angle_deg > -90.0 && m.angle_deg < 90.0)) {
      throw InvalidArgument("cosine falloff: angle " + text::format_double(m.angle_deg) + " outside (-90, 90)");
    }
    const double c = std::cos(m.angle_deg * std::numbers::pi / 180.0);
    for (std::size_t b = 0; b < sum.size(); ++b) {
      const double d = m.irradiance[b] - ref->irradiance[b] * c;
      sum[b] += d * d;
    }
    ++n;
  }
  BandVector rms{};
  if (n == 0) return rms;
  for (std::size_t b = 0; b < rms.size(); ++b) rms[b] = std::sqrt(sum[b] / static_cast<double>(n));
  return rms;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = r;
    i = j + 1;
  }
  return rank;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("spearman: series lengths differ");
  if (x.size() < 2) throw InvalidArgument("spearman: need at least 2 points");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::isnan(x[i]) || std::isnan(y[i])) throw InvalidArgument("spearman: NaN input");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace uasrad
