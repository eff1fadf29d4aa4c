#include "manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "uasrad/error.hpp"

namespace uasrad::cli {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("manifest " + where + ": " + what);
}

const Json& need(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing '") + key + "'");
  return *it;
}

double number(const Json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

int integer(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<int>();
}

std::string string(const Json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

double number_or(const Json& obj, const char* key, double fallback, const std::string& where) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, where + "." + key);
}

BandVector band_vector(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != kBandCount) fail(where, "expected an array of 5 numbers");
  BandVector out{};
  for (std::size_t i = 0; i < kBandCount; ++i) out[i] = number(v[i], where + "[" + std::to_string(i) + "]");
  return out;
}

Roi roi(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 4) fail(where, "expected [x, y, width, height]");
  std::array<std::size_t, 4> r{};
  for (std::size_t i = 0; i < 4; ++i) {
    const int x = integer(v[i], where);
    if (x < 0) fail(where, "negative ROI component");
    r[i] = static_cast<std::size_t>(x);
  }
  return {r[0], r[1], r[2], r[3]};
}

RadiometricMetadata metadata(const Json& v, int band, const std::string& where) {
  if (!v.is_object()) fail(where, "expected an object");
  for (const char* key : {"exposure_s", "exposure", "exposure_ms"}) {
    if (v.contains(key)) fail(where, std::string("'") + key + "' is not accepted; give exposure_us in microseconds");
  }
  RadiometricMetadata m;
  m.band_index = band;
  m.a1 = number(need(v, "a1", where), where + ".a1");
  m.a2 = number(need(v, "a2", where), where + ".a2");
  m.a3 = number(need(v, "a3", where), where + ".a3");
  m.gain = integer(need(v, "gain", where), where + ".gain");
  m.exposure_us = number(need(v, "exposure_us", where), where + ".exposure_us");
  m.dark_level = number_or(v, "dark_level", 0.0, where);
  m.bits_per_pixel = v.contains("bits_per_pixel") ? integer(v["bits_per_pixel"], where + ".bits_per_pixel") : 16;
  if (const auto it = v.find("vignette"); it != v.end()) {
    const auto w = where + ".vignette";
    m.vignette.center_x = number(need(*it, "center_x", w), w + ".center_x");
    m.vignette.center_y = number(need(*it, "center_y", w), w + ".center_y");
    const auto& k = need(*it, "coefficients", w);
    if (!k.is_array() || k.size() != 6) fail(w + ".coefficients", "expected 6 numbers");
    for (std::size_t i = 0; i < 6; ++i) m.vignette.coefficients[i] = number(k[i], w + ".coefficients");
  }
  return m;
}

DlsRecord dls(const Json& v, double image_timestamp, const std::string& where) {
  DlsRecord d;
  d.raw_irradiance = band_vector(need(v, "irradiance", where), where + ".irradiance");
  d.solar_elevation_deg = number_or(v, "solar_elevation_deg", 90.0, where);
  d.sun_sensor_angle_deg = number_or(v, "sun_sensor_angle_deg", 0.0, where);
  d.fresnel_factor = number_or(v, "fresnel_factor", 1.0, where);
  d.diffuse_ratio = number_or(v, "diffuse_ratio", kDefaultDiffuseRatio, where);
  d.timestamp = number_or(v, "timestamp", image_timestamp, where);
  return d;
}

PanelRef panel_ref(const Json& v, const std::string& where) {
  return {string(need(v, "panel", where), where + ".panel"), roi(need(v, "roi", where), where + ".roi")};
}

Json to_json(const Roi& r) { return Json::array({r.x, r.y, r.width, r.height}); }

Json to_json(const BandVector& v) { return Json(std::vector<double>(v.begin(), v.end())); }

}  // namespace

std::filesystem::path FlightManifest::resolve(const std::string& relative) const {
  const std::filesystem::path p(relative);
  return p.is_absolute() ? p : base_dir / p;
}

FlightManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("root", "expected an object");
  FlightManifest m;
  m.base_dir = base_dir;

  if (const auto it = root.find("flight"); it != root.end()) {
    if (!it->is_object()) fail("flight", "expected an object");
    if (it->contains("id")) m.flight.id = string((*it)["id"], "flight.id");
    if (it->contains("date")) m.flight.date = string((*it)["date"], "flight.date");
    if (it->contains("weather")) m.flight.weather = string((*it)["weather"], "flight.weather");
    if (it->contains("altitude_ft")) m.flight.altitude_ft = integer((*it)["altitude_ft"], "flight.altitude_ft");
  }
  if (const auto it = root.find("rsr_dir"); it != root.end()) m.rsr_dir = string(*it, "rsr_dir");

  if (const auto it = root.find("panels"); it != root.end()) {
    if (!it->is_object()) fail("panels", "expected an object of panel id -> spectrum");
    for (const auto& [id, spec] : it->items()) {
      const auto where = "panels." + id;
      PanelSpec p;
      if (spec.is_string()) {
        p.spectrum = spec.get<std::string>();
      } else if (spec.is_object() && spec.contains("spectrum")) {
        p.spectrum = string(spec["spectrum"], where + ".spectrum");
      } else if (spec.is_object() && spec.contains("band_reflectance")) {
        p.band_reflectance = band_vector(spec["band_reflectance"], where + ".band_reflectance");
      } else {
        fail(where, "expected a spectrum path or {\"band_reflectance\": [5 numbers]}");
      }
      m.panels.emplace(id, std::move(p));
    }
  }

  const auto& images = need(root, "images", "root");
  if (!images.is_array()) fail("images", "expected an array");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto& v = images[i];
    auto where = "images[" + std::to_string(i) + "]";
    ImageEntry e;
    e.id = string(need(v, "id", where), where + ".id");
    where = "image '" + e.id + "'";
    if (!ids.insert(e.id).second) fail(where, "duplicate image id");
    e.timestamp = number(need(v, "timestamp", where), where + ".timestamp");
    const auto& bands = need(v, "bands", where);
    if (!bands.is_array() || bands.size() != kBandCount) fail(where + ".bands", "expected exactly 5 band entries");
    for (std::size_t b = 0; b < kBandCount; ++b) {
      const auto bw = where + ".bands[" + std::to_string(b) + "]";
      BandEntry be;
      be.raw = string(need(bands[b], "raw", bw), bw + ".raw");
      if (bands[b].contains("radiance")) be.radiance = string(bands[b]["radiance"], bw + ".radiance");
      be.metadata = metadata(need(bands[b], "metadata", bw), static_cast<int>(b) + 1, bw + ".metadata");
      e.bands.push_back(std::move(be));
    }
    if (const auto it = v.find("dls"); it != v.end()) e.dls = dls(*it, e.timestamp, where + ".dls");
    if (const auto it = v.find("calibration"); it != v.end()) {
      const auto cw = where + ".calibration";
      CalibrationEntry c;
      if (it->contains("designated")) {
        if (!(*it)["designated"].is_boolean()) fail(cw + ".designated", "expected true or false");
        c.designated = (*it)["designated"].get<bool>();
      }
      c.bright = panel_ref(need(*it, "bright", cw), cw + ".bright");
      if (it->contains("dark")) c.dark = panel_ref((*it)["dark"], cw + ".dark");
      for (const auto* p : {&c.bright, c.dark ? &*c.dark : nullptr}) {
        if (p && !m.panels.contains(p->panel_id)) {
          fail(cw, "panel '" + p->panel_id + "' is not in the panel library");
        }
      }
      e.calibration = std::move(c);
    }
    m.images.push_back(std::move(e));
  }
  return m;
}

FlightManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path.parent_path());
}

std::string dump_manifest(const FlightManifest& m) {
  Json root;
  Json flight = Json::object();
  if (!m.flight.id.empty()) flight["id"] = m.flight.id;
  if (!m.flight.date.empty()) flight["date"] = m.flight.date;
  if (!m.flight.weather.empty()) flight["weather"] = m.flight.weather;
  if (m.flight.altitude_ft) flight["altitude_ft"] = *m.flight.altitude_ft;
  root["flight"] = flight;
  if (m.rsr_dir) root["rsr_dir"] = *m.rsr_dir;
  Json panels = Json::object();
  for (const auto& [id, p] : m.panels) {
    if (p.spectrum) {
      panels[id] = *p.spectrum;
    } else {
      panels[id] = Json{{"band_reflectance", to_json(*p.band_reflectance)}};
    }
  }
  root["panels"] = panels;
  Json images = Json::array();
  for (const auto& e : m.images) {
    Json img;
    img["id"] = e.id;
    img["timestamp"] = e.timestamp;
    Json bands = Json::array();
    for (const auto& b : e.bands) {
      Json be;
      be["raw"] = b.raw;
      if (b.radiance) be["radiance"] = *b.radiance;
      const auto& md = b.metadata;
      be["metadata"] = Json{{"a1", md.a1},
                            {"a2", md.a2},
                            {"a3", md.a3},
                            {"gain", md.gain},
                            {"exposure_us", md.exposure_us},
                            {"dark_level", md.dark_level},
                            {"bits_per_pixel", md.bits_per_pixel},
                            {"vignette",
                             Json{{"center_x", md.vignette.center_x},
                                  {"center_y", md.vignette.center_y},
                                  {"coefficients", std::vector<double>(md.vignette.coefficients.begin(),
                                                                       md.vignette.coefficients.end())}}}};
      bands.push_back(std::move(be));
    }
    img["bands"] = std::move(bands);
    if (e.dls) {
      img["dls"] = Json{{"irradiance", to_json(e.dls->raw_irradiance)},
                        {"solar_elevation_deg", e.dls->solar_elevation_deg},
                        {"sun_sensor_angle_deg", e.dls->sun_sensor_angle_deg},
                        {"fresnel_factor", e.dls->fresnel_factor},
                        {"diffuse_ratio", e.dls->diffuse_ratio},
                        {"timestamp", e.dls->timestamp}};
    }
    if (e.calibration) {
      Json c;
      c["designated"] = e.calibration->designated;
      c["bright"] = Json{{"panel", e.calibration->bright.panel_id}, {"roi", to_json(e.calibration->bright.roi)}};
      if (e.calibration->dark) {
        c["dark"] = Json{{"panel", e.calibration->dark->panel_id}, {"roi", to_json(e.calibration->dark->roi)}};
      }
      img["calibration"] = std::move(c);
    }
    images.push_back(std::move(img));
  }
  root["images"] = std::move(images);
  return root.dump(2) + "\n";
}

void save_manifest(const std::filesystem::path& path, const FlightManifest& manifest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write manifest " + path.string());
  out << dump_manifest(manifest);
}

}  // namespace uasrad::cli
