#pragma once

// Reader for MODTRAN-style columnar radiance output (tape7.scn).

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "uasrad/spectral_curve.hpp"

namespace uasrad {

struct Tape7Record {
  std::vector<double> wavelengths_nm;
  std::vector<double> total_radiance;    // TOTAL_RAD
  std::vector<double> ground_reflected;  // GRND_RFLT

  SpectralCurve total_radiance_curve() const;
  SpectralCurve ground_reflected_curve() const;
};

/// The header row is the first line with a token starting with WAV (the
/// wavelength column).
/// Columns are matched by name, unknown ones ignored. Wavelengths are taken
/// as microns (and converted to nm) when the header mentions MCRN, MICRON or
/// UM. Data rows run until EOF or a row starting with -9999.
Tape7Record ingest_tape7(std::istream& in);
Tape7Record ingest_tape7(const std::filesystem::path& path);

/// Band-free ratio of the sensor-reaching radiance run to the downwelling
/// reference run, sampled on the sensor run's grid.
SpectralCurve maarr_reflectance(const Tape7Record& sensor_run, const Tape7Record& reference_run);

}  // namespace uasrad
