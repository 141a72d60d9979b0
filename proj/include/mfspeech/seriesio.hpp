#pragma once

#include <string>

#include "mfspeech/core.hpp"

namespace mfspeech {

// Shortest round-trip decimal rendering (std::to_chars); deterministic.
std::string fmt_double(double v);

// Single-column CSV of samples; '#' lines are comments. sample_rate is not
// stored, readers get 1 Hz.
void write_series_csv(const std::string& path, const TimeSeries& x,
                      const std::string& header_comment);
TimeSeries read_series_csv(const std::string& path);

// Dispatch on extension: .wav -> decoder, anything else -> CSV reader.
TimeSeries load_series(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace mfspeech
