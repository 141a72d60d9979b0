#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "mfspeech/core.hpp"

namespace mfspeech {

enum class Corpus { Berlin, Tess };

struct CorpusEntry {
    std::string path;
    EmotionLabel label = EmotionLabel::Neutral;
    Corpus corpus = Corpus::Berlin;
};

// RIFF/WAVE PCM decoder: integer PCM (8/16/24/32-bit) and IEEE float
// (32/64-bit), any channel count (mixed down by channel mean), tolerant of
// extra chunks in any order. Integer samples are scaled by full scale.
TimeSeries decode_wav(std::span<const std::uint8_t> bytes);

TimeSeries load_wav(const std::string& path);

// Mono 32-bit float WAV writer (the synth output format).
void write_wav_float32(const std::string& path, const TimeSeries& x);

// Scale so the peak magnitude is exactly 1. Idempotent.
TimeSeries normalize_peak(const TimeSeries& x);

// Berlin naming: speaker digits + text code + emotion letter + version,
// e.g. 03a01Fa.wav. F/N/T map to the three in-scope classes; the other four
// emotion letters (W, A, E, L) yield nullopt.
std::optional<EmotionLabel> parse_label_berlin(const std::string& filename);

// TESS naming: ACTOR_word_emotion.wav; happy/neutral/sad are in scope.
std::optional<EmotionLabel> parse_label_tess(const std::string& path);

// Recursive scan for .wav files whose label parses to an in-scope emotion;
// malformed names and out-of-scope emotions are skipped. Sorted by path.
std::vector<CorpusEntry> scan_corpus(const std::string& root, Corpus convention);

}  // namespace mfspeech
