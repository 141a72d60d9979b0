#include "mfspeech/seriesio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mfspeech/audio_io.hpp"

namespace mfspeech {

std::string fmt_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_series_csv(const std::string& path, const TimeSeries& x,
                      const std::string& header_comment) {
    std::ofstream file(path, std::ios::trunc);
    if (!file) throw Error(Errc::IoError, "cannot open " + path + " for writing");
    if (!header_comment.empty()) file << "# " << header_comment << "\n";
    for (double v : x.samples) file << fmt_double(v) << "\n";
    if (!file) throw Error(Errc::IoError, "write failure on " + path);
}

TimeSeries read_series_csv(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw Error(Errc::IoError, "cannot open " + path);
    TimeSeries out;
    out.sample_rate = 1.0;
    std::string line;
    while (std::getline(file, line)) {
        std::size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos || line[begin] == '#') continue;
        const char* first = line.data() + begin;
        double v = 0.0;
        const auto res = std::from_chars(first, line.data() + line.size(), v);
        if (res.ec != std::errc())
            throw Error(Errc::MalformedContainer, "bad number in " + path + ": " + line);
        out.samples.push_back(v);
    }
    if (out.samples.empty()) throw Error(Errc::EmptyData, "no samples in " + path);
    return out;
}

TimeSeries load_series(const std::string& path) {
    std::string ext;
    const std::size_t dot = path.find_last_of('.');
    if (dot != std::string::npos) ext = path.substr(dot);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".wav") return load_wav(path);
    return read_series_csv(path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw Error(Errc::IoError, "cannot open " + path);
    std::ostringstream ss;
    ss << file.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(Errc::IoError, "cannot open " + path + " for writing");
    file << text;
    if (!file) throw Error(Errc::IoError, "write failure on " + path);
}

}  // namespace mfspeech
