#include "mfspeech/audio_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace mfspeech {

namespace {

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t off) {
    return static_cast<std::uint32_t>(b[off]) | static_cast<std::uint32_t>(b[off + 1]) << 8 |
           static_cast<std::uint32_t>(b[off + 2]) << 16 |
           static_cast<std::uint32_t>(b[off + 3]) << 24;
}

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t off) {
    return static_cast<std::uint16_t>(b[off] | b[off + 1] << 8);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t off, const char* tag) {
    return std::memcmp(b.data() + off, tag, 4) == 0;
}

struct FmtInfo {
    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits = 0;
};

double decode_sample(const std::uint8_t* p, std::uint16_t format, std::uint16_t bits) {
    if (format == 1) {
        switch (bits) {
            case 8:
                return (static_cast<double>(*p) - 128.0) / 128.0;
            case 16: {
                const auto v = static_cast<std::int16_t>(p[0] | p[1] << 8);
                return static_cast<double>(v) / 32768.0;
            }
            case 24: {
                std::int32_t v = p[0] | p[1] << 8 | p[2] << 16;
                if (v & 0x800000) v |= ~0xFFFFFF;  // sign extend
                return static_cast<double>(v) / 8388608.0;
            }
            case 32: {
                std::int32_t v;
                std::memcpy(&v, p, 4);
                return static_cast<double>(v) / 2147483648.0;
            }
            default:
                throw Error(Errc::UnsupportedEncoding,
                            "unsupported PCM bit depth " + std::to_string(bits));
        }
    }
    if (format == 3) {
        if (bits == 32) {
            float v;
            std::memcpy(&v, p, 4);
            return static_cast<double>(v);
        }
        if (bits == 64) {
            double v;
            std::memcpy(&v, p, 8);
            return v;
        }
        throw Error(Errc::UnsupportedEncoding,
                    "unsupported float bit depth " + std::to_string(bits));
    }
    throw Error(Errc::UnsupportedEncoding, "unsupported format tag " + std::to_string(format));
}

std::string basename_stem(const std::string& path) {
    const fs::path p(path);
    return p.stem().string();
}

}  // namespace

TimeSeries decode_wav(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE"))
        throw Error(Errc::MalformedContainer, "missing RIFF/WAVE header");

    std::optional<FmtInfo> fmt;
    std::span<const std::uint8_t> data;
    bool have_data = false;

    std::size_t off = 12;
    while (off + 8 <= bytes.size()) {
        const std::size_t chunk_size = read_u32(bytes, off + 4);
        const std::size_t payload = off + 8;
        if (payload + chunk_size > bytes.size())
            throw Error(Errc::MalformedContainer, "truncated chunk");

        if (tag_is(bytes, off, "fmt ")) {
            if (chunk_size < 16) throw Error(Errc::MalformedContainer, "fmt chunk too small");
            FmtInfo info;
            info.format = read_u16(bytes, payload);
            info.channels = read_u16(bytes, payload + 2);
            info.sample_rate = read_u32(bytes, payload + 4);
            info.bits = read_u16(bytes, payload + 14);
            // WAVE_FORMAT_EXTENSIBLE wraps the real tag in the SubFormat GUID
            if (info.format == 0xFFFE && chunk_size >= 40)
                info.format = read_u16(bytes, payload + 24);
            fmt = info;
        } else if (tag_is(bytes, off, "data")) {
            data = bytes.subspan(payload, chunk_size);
            have_data = true;
        }
        off = payload + chunk_size + (chunk_size & 1);  // chunks are word-aligned
    }

    if (!fmt) throw Error(Errc::MalformedContainer, "missing fmt chunk");
    if (!have_data) throw Error(Errc::MalformedContainer, "missing data chunk");
    if (fmt->channels == 0 || fmt->sample_rate == 0 || fmt->bits == 0 || fmt->bits % 8 != 0)
        throw Error(Errc::MalformedContainer, "inconsistent fmt fields");
    if (fmt->format != 1 && fmt->format != 3)
        throw Error(Errc::UnsupportedEncoding,
                    "unsupported format tag " + std::to_string(fmt->format));

    const std::size_t bytes_per_sample = fmt->bits / 8;
    const std::size_t frame_bytes = bytes_per_sample * fmt->channels;
    const std::size_t frames = data.size() / frame_bytes;
    if (frames == 0) throw Error(Errc::EmptyData, "no audio frames");

    TimeSeries out;
    out.sample_rate = static_cast<double>(fmt->sample_rate);
    out.samples.resize(frames);
    const double inv_channels = 1.0 / fmt->channels;
    for (std::size_t i = 0; i < frames; ++i) {
        const std::uint8_t* frame = data.data() + i * frame_bytes;
        double acc = 0.0;
        for (std::uint16_t c = 0; c < fmt->channels; ++c)
            acc += decode_sample(frame + c * bytes_per_sample, fmt->format, fmt->bits);
        out.samples[i] = acc * inv_channels;
    }
    return out;
}

TimeSeries load_wav(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw Error(Errc::IoError, "cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(file)),
                                    std::istreambuf_iterator<char>());
    if (file.bad()) throw Error(Errc::IoError, "read failure on " + path);
    return decode_wav(bytes);
}

void write_wav_float32(const std::string& path, const TimeSeries& x) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(Errc::IoError, "cannot open " + path + " for writing");

    const std::uint32_t data_size = static_cast<std::uint32_t>(x.samples.size() * 4);
    const std::uint32_t rate = static_cast<std::uint32_t>(std::lround(x.sample_rate));
    auto put_u32 = [&](std::uint32_t v) { file.write(reinterpret_cast<const char*>(&v), 4); };
    auto put_u16 = [&](std::uint16_t v) { file.write(reinterpret_cast<const char*>(&v), 2); };

    file.write("RIFF", 4);
    put_u32(36 + data_size);
    file.write("WAVE", 4);
    file.write("fmt ", 4);
    put_u32(16);
    put_u16(3);  // IEEE float
    put_u16(1);  // mono
    put_u32(rate);
    put_u32(rate * 4);
    put_u16(4);
    put_u16(32);
    file.write("data", 4);
    put_u32(data_size);
    for (double v : x.samples) {
        const float f = static_cast<float>(v);
        file.write(reinterpret_cast<const char*>(&f), 4);
    }
    if (!file) throw Error(Errc::IoError, "write failure on " + path);
}

TimeSeries normalize_peak(const TimeSeries& x) {
    double peak = 0.0;
    for (double v : x.samples) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) throw Error(Errc::AllZeroSignal, "cannot peak-normalize silence");
    TimeSeries out;
    out.sample_rate = x.sample_rate;
    out.samples.resize(x.samples.size());
    for (std::size_t i = 0; i < x.samples.size(); ++i) out.samples[i] = x.samples[i] / peak;
    return out;
}

std::optional<EmotionLabel> parse_label_berlin(const std::string& filename) {
    const std::string stem = basename_stem(filename);
    if (stem.size() < 7 || !std::isdigit(static_cast<unsigned char>(stem[0])) ||
        !std::isdigit(static_cast<unsigned char>(stem[1])))
        throw Error(Errc::MalformedName, "not a Berlin-convention name: " + filename);
    switch (stem[5]) {
        case 'F': return EmotionLabel::Happiness;
        case 'N': return EmotionLabel::Neutral;
        case 'T': return EmotionLabel::Sadness;
        case 'W':
        case 'A':
        case 'E':
        case 'L': return std::nullopt;  // anger, fear, disgust, boredom
        default:
            throw Error(Errc::MalformedName, "unknown Berlin emotion letter in " + filename);
    }
}

std::optional<EmotionLabel> parse_label_tess(const std::string& path) {
    const std::string stem = basename_stem(path);
    std::vector<std::string> tokens;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = stem.find('_', start);
        if (pos == std::string::npos) {
            tokens.push_back(stem.substr(start));
            break;
        }
        tokens.push_back(stem.substr(start, pos - start));
        start = pos + 1;
    }
    if (tokens.size() < 3 || tokens.back().empty())
        throw Error(Errc::MalformedName, "not a TESS-convention name: " + path);
    std::string emotion = tokens.back();
    std::transform(emotion.begin(), emotion.end(), emotion.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (emotion == "happy") return EmotionLabel::Happiness;
    if (emotion == "neutral") return EmotionLabel::Neutral;
    if (emotion == "sad") return EmotionLabel::Sadness;
    return std::nullopt;
}

std::vector<CorpusEntry> scan_corpus(const std::string& root, Corpus convention) {
    std::error_code ec;
    if (!fs::is_directory(root, ec))
        throw Error(Errc::IoError, "corpus root is not a directory: " + root);

    std::vector<CorpusEntry> entries;
    for (auto it = fs::recursive_directory_iterator(root, ec);
         it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) throw Error(Errc::IoError, "scan failure under " + root + ": " + ec.message());
        if (!it->is_regular_file()) continue;
        std::string ext = it->path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext != ".wav") continue;

        std::optional<EmotionLabel> label;
        try {
            label = convention == Corpus::Berlin ? parse_label_berlin(it->path().string())
                                                 : parse_label_tess(it->path().string());
        } catch (const Error&) {
            continue;  // non-convention names are skipped, not fatal
        }
        if (!label) continue;
        entries.push_back(CorpusEntry{it->path().string(), *label, convention});
    }
    if (ec) throw Error(Errc::IoError, "scan failure under " + root + ": " + ec.message());
    std::sort(entries.begin(), entries.end(),
              [](const CorpusEntry& a, const CorpusEntry& b) { return a.path < b.path; });
    return entries;
}

}  // namespace mfspeech
