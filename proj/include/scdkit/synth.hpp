#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scdkit/rttm.hpp"
#include "scdkit/wav.hpp"

namespace scdkit {

// Energy-based silence detector for clean read speech. A frame is silent
// when its RMS is below max(abs_floor, rel_floor * loudest frame RMS).
struct SilenceDetector {
  double window = 0.025;
  double step = 0.010;
  double abs_floor = 1e-3;
  double rel_floor = 0.02;
};

// Leading and trailing silence of an utterance, in samples.
struct SpeechBounds {
  std::size_t lead = 0;
  std::size_t tail = 0;
};

// Throws Error(kInvalidArgument) when no frame holds speech.
SpeechBounds detect_speech_bounds(const Audio& audio,
                                  const SilenceDetector& detector = {});

struct Utterance {
  std::string id;
  std::string speaker;
  Audio audio;
  SpeechBounds bounds;

  std::size_t speech_begin() const { return bounds.lead; }
  std::size_t speech_end() const { return audio.samples.size() - bounds.tail; }
  std::size_t speech_samples() const { return speech_end() - speech_begin(); }
};

// Cuts leading and trailing silence down to at most `taper` seconds and
// fades what remains linearly: 0 -> 1 up to the speech onset and 1 -> 0
// after the speech offset. Speech samples are untouched.
Utterance trim_and_taper(const Utterance& utterance, double taper);

enum class JoinKind { kPause, kOverlap };

struct Join {
  JoinKind kind = JoinKind::kPause;
  double amount = 0.0;  // seconds in [0, max_amount]

  friend bool operator==(const Join&, const Join&) = default;
};

inline constexpr std::size_t kSequenceUtterances = 5;
inline constexpr std::size_t kSequenceJoins = kSequenceUtterances - 1;

// Everything needed to rebuild one synthetic conversation bit-exactly from
// the pool: utterances in A-B-A-B-A order and the four joins between them.
struct SynthRecipe {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string speaker_a;
  std::string speaker_b;
  std::array<std::string, kSequenceUtterances> utterance_ids;
  std::array<Join, kSequenceJoins> joins;
  double taper = 0.5;

  std::string name() const;
  // Throws Error(kInvalidArgument) when the speakers coincide, a join amount
  // is negative or an utterance repeats.
  void validate() const;

  friend bool operator==(const SynthRecipe&, const SynthRecipe&) = default;
};

std::string recipe_to_json(const SynthRecipe& recipe);
SynthRecipe recipe_from_json(std::string_view line);

struct SynthSequence {
  Audio audio;
  Timeline timeline;  // one turn per utterance, exactly its placed speech
  SynthRecipe recipe;
};

// Places each utterance so that its speech starts `amount` after (pause) or
// before (overlap) the previous speech ends, and mixes by summation. Where
// two sources overlap and their sum would clip, both are halved over the
// shared span. Utterances must already be trimmed and tapered. Throws
// Error(kInvalidArgument) for an overlap longer than either speech region
// or speakers that do not follow the recipe.
SynthSequence compose_sequence(std::span<const Utterance> utterances,
                               const SynthRecipe& recipe);

struct UtteranceInfo {
  std::string id;
  std::string speaker;
  std::filesystem::path path;  // empty for in-memory utterances
  std::uint32_t sample_rate = 0;
  std::size_t samples = 0;
  SpeechBounds bounds;
};

// The utterances a corpus draws from, grouped by speaker. Audio files are
// only decoded when first needed. Not thread-safe.
class UtterancePool {
 public:
  explicit UtterancePool(SilenceDetector detector = {}) : detector_(detector) {}

  // Directory tree of 16 kHz mono 16-bit WAV files. `speaker_template` is
  // matched against each path relative to `root`, one '/'-separated
  // component at a time: "{speaker}" captures the speaker, other components
  // are shell globs. LibriSpeech layout: "{speaker}/*/*.wav".
  static UtterancePool scan(const std::filesystem::path& root,
                            std::string_view speaker_template,
                            SilenceDetector detector = {});

  void add(Utterance utterance);
  void add_file(std::string id, std::string speaker, std::filesystem::path path);

  std::vector<std::string> speakers() const;
  const std::vector<std::string>& utterances_of(const std::string& speaker) const;
  std::size_t size() const { return entries_.size(); }

  // Sample rate, length and speech bounds; decodes the file once.
  const UtteranceInfo& info(const std::string& id);
  Utterance load(const std::string& id);

 private:
  struct Entry {
    UtteranceInfo info;
    bool measured = false;
    std::optional<Audio> audio;
  };
  Entry& entry(const std::string& id);

  SilenceDetector detector_;
  std::map<std::string, Entry> entries_;
  std::map<std::string, std::vector<std::string>> by_speaker_;
};

struct SynthConfig {
  double taper = 0.5;
  double pause_probability = 0.5;
  double max_amount = 2.0;
  std::uint32_t sample_rate = 16000;
};

// Deterministic per-sequence seed from the corpus seed and sequence index.
std::uint64_t sequence_seed(std::uint64_t corpus_seed, std::size_t index);

// Draws one recipe: speaker A among speakers with >= 3 utterances, B among
// the others with >= 2, utterances without replacement, join kinds by a
// biased coin and amounts uniform on [0, max_amount]. Overlap amounts that
// would exceed a neighbouring speech region are redrawn. Throws
// Error(kInsufficientPool).
SynthRecipe plan_sequence(UtterancePool& pool, std::size_t index,
                          std::uint64_t seed, const SynthConfig& config = {});

std::vector<SynthRecipe> plan_corpus(UtterancePool& pool, std::size_t n_sequences,
                                     std::uint64_t seed,
                                     const SynthConfig& config = {});

// Duration in seconds of the rendered sequence, from pool metadata only.
double sequence_duration(UtterancePool& pool, const SynthRecipe& recipe);

SynthSequence render_sequence(UtterancePool& pool, const SynthRecipe& recipe);

struct CorpusManifest {
  std::vector<SynthRecipe> recipes;
  double total_duration = 0.0;
};

// Renders every recipe to <out_dir>/<name>.wav and <name>.rttm and writes
// <out_dir>/manifest.jsonl with one recipe per line.
CorpusManifest write_corpus(UtterancePool& pool,
                            const std::vector<SynthRecipe>& recipes,
                            const std::filesystem::path& out_dir);

CorpusManifest build_corpus(UtterancePool& pool, std::size_t n_sequences,
                            std::uint64_t seed, const std::filesystem::path& out_dir,
                            const SynthConfig& config = {});

std::vector<SynthRecipe> read_manifest(const std::filesystem::path& path);

}  // namespace scdkit
