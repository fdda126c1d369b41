#include "scdkit/synth.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "scdkit/error.hpp"

namespace scdkit {
namespace fs = std::filesystem;

namespace {

// Largest magnitude that survives conversion to 16-bit PCM unclipped.
constexpr float kFullScale = 32767.0f / 32768.0f;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// The standard distributions are not specified bit-for-bit across library
// implementations, so draws are derived from the raw engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t index(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform01() * static_cast<double>(n)));
  }

 private:
  std::mt19937_64 engine_;
};

std::size_t seconds_to_samples(double seconds, std::uint32_t rate) {
  return static_cast<std::size_t>(std::llround(seconds * rate));
}

struct Geometry {
  std::size_t samples = 0;
  std::size_t lead = 0;
  std::size_t tail = 0;
  std::size_t speech() const { return samples - lead - tail; }
};

Geometry trimmed_geometry(const UtteranceInfo& info, double taper) {
  const std::size_t keep = seconds_to_samples(taper, info.sample_rate);
  Geometry g;
  g.lead = std::min(info.bounds.lead, keep);
  g.tail = std::min(info.bounds.tail, keep);
  g.samples = info.samples - (info.bounds.lead - g.lead) - (info.bounds.tail - g.tail);
  return g;
}

struct Layout {
  std::vector<std::size_t> start;  // buffer start per utterance
  std::vector<std::size_t> speech_begin;
  std::vector<std::size_t> speech_end;
  std::size_t total = 0;
};

Layout layout(std::span<const Geometry> parts, const SynthRecipe& recipe,
              std::uint32_t rate) {
  std::vector<std::int64_t> onset(parts.size());
  onset[0] = static_cast<std::int64_t>(parts[0].lead);
  for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
    const auto& join = recipe.joins[k];
    const auto amount = static_cast<std::int64_t>(seconds_to_samples(join.amount, rate));
    if (join.kind == JoinKind::kOverlap &&
        (amount > static_cast<std::int64_t>(parts[k].speech()) ||
         amount > static_cast<std::int64_t>(parts[k + 1].speech()))) {
      throw Error(ErrorCode::kInvalidArgument,
                  recipe.name() + ": overlap of join " + std::to_string(k) +
                      " exceeds a speech region");
    }
    const auto prev_end = onset[k] + static_cast<std::int64_t>(parts[k].speech());
    onset[k + 1] = join.kind == JoinKind::kPause ? prev_end + amount : prev_end - amount;
  }
  std::int64_t first = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    first = std::min(first, onset[k] - static_cast<std::int64_t>(parts[k].lead));
  }
  Layout out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto begin = static_cast<std::size_t>(onset[k] - first);
    out.speech_begin.push_back(begin);
    out.speech_end.push_back(begin + parts[k].speech());
    out.start.push_back(begin - parts[k].lead);
    out.total = std::max(out.total, out.start.back() + parts[k].samples);
  }
  return out;
}

const char* kind_name(JoinKind kind) {
  return kind == JoinKind::kPause ? "pause" : "overlap";
}

bool glob_match(const std::string& pattern, const std::string& text) {
  return fnmatch(pattern.c_str(), text.c_str(), 0) == 0;
}

std::vector<std::string> split_path(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t slash = text.find('/', pos);
    if (slash == std::string::npos) slash = text.size();
    if (slash > pos) parts.push_back(text.substr(pos, slash - pos));
    pos = slash + 1;
  }
  return parts;
}

}  // namespace

SpeechBounds detect_speech_bounds(const Audio& audio,
                                  const SilenceDetector& detector) {
  const std::size_t n = audio.samples.size();
  const std::size_t win = std::max<std::size_t>(1, seconds_to_samples(detector.window, audio.sample_rate));
  const std::size_t step = std::max<std::size_t>(1, seconds_to_samples(detector.step, audio.sample_rate));

  std::vector<double> rms;
  for (std::size_t s = 0; s < n; s += step) {
    const std::size_t e = std::min(n, s + win);
    double acc = 0.0;
    for (std::size_t i = s; i < e; ++i) acc += double(audio.samples[i]) * audio.samples[i];
    rms.push_back(std::sqrt(acc / static_cast<double>(e - s)));
    if (e == n) break;
  }
  const double peak = rms.empty() ? 0.0 : *std::max_element(rms.begin(), rms.end());
  const double floor = std::max(detector.abs_floor, detector.rel_floor * peak);

  std::optional<std::size_t> first, last;
  for (std::size_t f = 0; f < rms.size(); ++f) {
    if (rms[f] >= floor) {
      if (!first) first = f;
      last = f;
    }
  }
  if (!first) {
    throw Error(ErrorCode::kInvalidArgument, "utterance contains no detectable speech");
  }
  SpeechBounds bounds;
  bounds.lead = *first * step;
  bounds.tail = n - std::min(n, *last * step + win);
  return bounds;
}

Utterance trim_and_taper(const Utterance& utterance, double taper) {
  if (!(taper > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "taper must be positive");
  }
  if (utterance.speech_end() <= utterance.speech_begin()) {
    throw Error(ErrorCode::kInvalidArgument,
                "utterance '" + utterance.id + "' has no speech");
  }
  const std::size_t keep = seconds_to_samples(taper, utterance.audio.sample_rate);
  const std::size_t lead = std::min(utterance.bounds.lead, keep);
  const std::size_t tail = std::min(utterance.bounds.tail, keep);
  const auto& src = utterance.audio.samples;

  Utterance out;
  out.id = utterance.id;
  out.speaker = utterance.speaker;
  out.audio.sample_rate = utterance.audio.sample_rate;
  out.audio.samples.assign(src.begin() + static_cast<std::ptrdiff_t>(utterance.bounds.lead - lead),
                           src.end() - static_cast<std::ptrdiff_t>(utterance.bounds.tail - tail));
  out.bounds = {lead, tail};

  auto& dst = out.audio.samples;
  for (std::size_t k = 0; k < lead; ++k) {
    dst[k] *= static_cast<float>(static_cast<double>(k) / static_cast<double>(lead));
  }
  const std::size_t tail_begin = dst.size() - tail;
  for (std::size_t k = 0; k < tail; ++k) {
    dst[tail_begin + k] *=
        static_cast<float>(static_cast<double>(tail - 1 - k) / static_cast<double>(tail));
  }
  return out;
}

std::string SynthRecipe::name() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "synth_%05zu", index);
  return buf;
}

void SynthRecipe::validate() const {
  if (speaker_a.empty() || speaker_b.empty() || speaker_a == speaker_b) {
    throw Error(ErrorCode::kInvalidArgument, name() + ": needs two distinct speakers");
  }
  std::set<std::string> ids(utterance_ids.begin(), utterance_ids.end());
  if (ids.size() != utterance_ids.size()) {
    throw Error(ErrorCode::kInvalidArgument, name() + ": utterances must be distinct");
  }
  for (const auto& join : joins) {
    if (!(join.amount >= 0.0) || !std::isfinite(join.amount)) {
      throw Error(ErrorCode::kInvalidArgument, name() + ": join amounts must be >= 0");
    }
  }
  if (!(taper > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, name() + ": taper must be positive");
  }
}

std::string recipe_to_json(const SynthRecipe& recipe) {
  nlohmann::json j;
  j["index"] = recipe.index;
  j["name"] = recipe.name();
  j["seed"] = recipe.seed;
  j["speakers"] = {recipe.speaker_a, recipe.speaker_b};
  j["utterances"] = recipe.utterance_ids;
  j["taper"] = recipe.taper;
  auto& joins = j["joins"] = nlohmann::json::array();
  for (const auto& join : recipe.joins) {
    joins.push_back({{"kind", kind_name(join.kind)}, {"amount", join.amount}});
  }
  return j.dump();
}

SynthRecipe recipe_from_json(std::string_view line) {
  SynthRecipe r;
  try {
    auto j = nlohmann::json::parse(line);
    r.index = j.at("index").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    const auto& speakers = j.at("speakers");
    r.speaker_a = speakers.at(0).get<std::string>();
    r.speaker_b = speakers.at(1).get<std::string>();
    const auto& utts = j.at("utterances");
    const auto& joins = j.at("joins");
    if (utts.size() != kSequenceUtterances || joins.size() != kSequenceJoins) {
      throw Error(ErrorCode::kParse, "recipe needs 5 utterances and 4 joins");
    }
    for (std::size_t k = 0; k < kSequenceUtterances; ++k) {
      r.utterance_ids[k] = utts[k].get<std::string>();
    }
    for (std::size_t k = 0; k < kSequenceJoins; ++k) {
      const auto kind = joins[k].at("kind").get<std::string>();
      if (kind != "pause" && kind != "overlap") {
        throw Error(ErrorCode::kParse, "unknown join kind '" + kind + "'");
      }
      r.joins[k].kind = kind == "pause" ? JoinKind::kPause : JoinKind::kOverlap;
      r.joins[k].amount = joins[k].at("amount").get<double>();
    }
    r.taper = j.at("taper").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad recipe: ") + e.what());
  }
  r.validate();
  return r;
}

SynthSequence compose_sequence(std::span<const Utterance> utterances,
                               const SynthRecipe& recipe) {
  recipe.validate();
  if (utterances.size() != kSequenceUtterances) {
    throw Error(ErrorCode::kInvalidArgument, "a sequence needs exactly 5 utterances");
  }
  const std::uint32_t rate = utterances[0].audio.sample_rate;
  std::vector<Geometry> parts;
  for (std::size_t k = 0; k < utterances.size(); ++k) {
    const auto& u = utterances[k];
    const auto& expected = k % 2 == 0 ? recipe.speaker_a : recipe.speaker_b;
    if (u.speaker != expected) {
      throw Error(ErrorCode::kInvalidArgument,
                  recipe.name() + ": utterance " + std::to_string(k) +
                      " is by '" + u.speaker + "', expected '" + expected + "'");
    }
    if (u.audio.sample_rate != rate) {
      throw Error(ErrorCode::kInvalidArgument, recipe.name() + ": mixed sample rates");
    }
    if (u.speech_end() <= u.speech_begin()) {
      throw Error(ErrorCode::kInvalidArgument, "utterance '" + u.id + "' has no speech");
    }
    parts.push_back({u.audio.samples.size(), u.bounds.lead, u.bounds.tail});
  }
  const Layout lay = layout(parts, recipe, rate);

  SynthSequence seq;
  seq.recipe = recipe;
  seq.audio.sample_rate = rate;
  auto& mix = seq.audio.samples;
  mix.assign(lay.total, 0.0f);
  std::size_t covered_end = 0;  // end of the span already holding audio
  for (std::size_t k = 0; k < utterances.size(); ++k) {
    const auto& src = utterances[k].audio.samples;
    const std::size_t start = lay.start[k];
    const std::size_t shared_end = std::min(covered_end, start + src.size());
    bool clips = false;
    for (std::size_t i = start; i < shared_end; ++i) {
      if (std::abs(mix[i] + src[i - start]) > kFullScale) {
        clips = true;
        break;
      }
    }
    for (std::size_t i = 0; i < src.size(); ++i) {
      const std::size_t at = start + i;
      if (clips && at < shared_end) {
        mix[at] = 0.5f * (mix[at] + src[i]);
      } else {
        mix[at] += src[i];
      }
    }
    covered_end = std::max(covered_end, start + src.size());
  }

  std::vector<SpeakerTurn> turns;
  for (std::size_t k = 0; k < utterances.size(); ++k) {
    const double on = static_cast<double>(lay.speech_begin[k]) / rate;
    const double off = static_cast<double>(lay.speech_end[k]) / rate;
    turns.push_back({recipe.name(), on, off - on, utterances[k].speaker});
  }
  seq.timeline = Timeline(recipe.name(), std::move(turns),
                          static_cast<double>(lay.total) / rate);
  return seq;
}

UtterancePool UtterancePool::scan(const fs::path& root,
                                  std::string_view speaker_template,
                                  SilenceDetector detector) {
  const auto pattern = split_path(std::string(speaker_template));
  const auto speaker_slot =
      std::find(pattern.begin(), pattern.end(), "{speaker}") - pattern.begin();
  if (static_cast<std::size_t>(speaker_slot) == pattern.size()) {
    throw Error(ErrorCode::kInvalidArgument, "speaker template lacks {speaker}");
  }
  if (!fs::is_directory(root)) {
    throw Error(ErrorCode::kIo, "'" + root.string() + "' is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  UtterancePool pool(detector);
  for (const auto& file : files) {
    const auto rel = fs::relative(file, root).generic_string();
    const auto parts = split_path(rel);
    if (parts.size() != pattern.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < parts.size() && ok; ++i) {
      if (static_cast<std::ptrdiff_t>(i) != speaker_slot) ok = glob_match(pattern[i], parts[i]);
    }
    if (!ok) continue;
    auto id = fs::path(rel).replace_extension().generic_string();
    pool.add_file(std::move(id), parts[static_cast<std::size_t>(speaker_slot)], file);
  }
  return pool;
}

void UtterancePool::add(Utterance utterance) {
  Entry e;
  e.info.id = utterance.id;
  e.info.speaker = utterance.speaker;
  e.info.sample_rate = utterance.audio.sample_rate;
  e.info.samples = utterance.audio.samples.size();
  e.info.bounds = utterance.bounds;
  e.measured = true;
  e.audio = std::move(utterance.audio);
  const auto id = e.info.id;
  const auto speaker = e.info.speaker;
  if (!entries_.emplace(id, std::move(e)).second) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate utterance id '" + id + "'");
  }
  by_speaker_[speaker].push_back(id);
}

void UtterancePool::add_file(std::string id, std::string speaker, fs::path path) {
  Entry e;
  e.info.id = id;
  e.info.speaker = speaker;
  e.info.path = std::move(path);
  if (!entries_.emplace(id, std::move(e)).second) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate utterance id '" + id + "'");
  }
  by_speaker_[speaker].push_back(std::move(id));
}

std::vector<std::string> UtterancePool::speakers() const {
  std::vector<std::string> out;
  for (const auto& [speaker, ids] : by_speaker_) out.push_back(speaker);
  return out;
}

const std::vector<std::string>& UtterancePool::utterances_of(
    const std::string& speaker) const {
  static const std::vector<std::string> kNone;
  auto it = by_speaker_.find(speaker);
  return it == by_speaker_.end() ? kNone : it->second;
}

UtterancePool::Entry& UtterancePool::entry(const std::string& id) {
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    throw Error(ErrorCode::kInsufficientPool, "utterance '" + id + "' is not in the pool");
  }
  return it->second;
}

const UtteranceInfo& UtterancePool::info(const std::string& id) {
  Entry& e = entry(id);
  if (!e.measured) {
    Audio audio = read_wav(e.info.path.string());
    e.info.sample_rate = audio.sample_rate;
    e.info.samples = audio.samples.size();
    e.info.bounds = detect_speech_bounds(audio, detector_);
    e.measured = true;
  }
  return e.info;
}

Utterance UtterancePool::load(const std::string& id) {
  const UtteranceInfo& meta = info(id);
  Entry& e = entry(id);
  Utterance u;
  u.id = meta.id;
  u.speaker = meta.speaker;
  u.bounds = meta.bounds;
  u.audio = e.audio ? *e.audio : read_wav(meta.path.string());
  return u;
}

std::uint64_t sequence_seed(std::uint64_t corpus_seed, std::size_t index) {
  return splitmix64(corpus_seed ^ splitmix64(static_cast<std::uint64_t>(index)));
}

SynthRecipe plan_sequence(UtterancePool& pool, std::size_t index,
                          std::uint64_t seed, const SynthConfig& config) {
  const auto speakers = pool.speakers();
  std::vector<std::string> can_a;
  for (const auto& a : speakers) {
    if (pool.utterances_of(a).size() < 3) continue;
    bool has_b = std::any_of(speakers.begin(), speakers.end(), [&](const auto& b) {
      return b != a && pool.utterances_of(b).size() >= 2;
    });
    if (has_b) can_a.push_back(a);
  }
  if (can_a.empty()) {
    throw Error(ErrorCode::kInsufficientPool,
                "pool needs two speakers with at least 3 and 2 utterances");
  }

  SynthRecipe r;
  r.index = index;
  r.seed = sequence_seed(seed, index);
  r.taper = config.taper;
  Rng rng(r.seed);
  r.speaker_a = can_a[rng.index(can_a.size())];
  std::vector<std::string> can_b;
  for (const auto& b : speakers) {
    if (b != r.speaker_a && pool.utterances_of(b).size() >= 2) can_b.push_back(b);
  }
  r.speaker_b = can_b[rng.index(can_b.size())];

  auto draw = [&rng](std::vector<std::string> ids, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      std::swap(ids[i], ids[i + rng.index(ids.size() - i)]);
    }
    ids.resize(count);
    return ids;
  };
  const auto from_a = draw(pool.utterances_of(r.speaker_a), 3);
  const auto from_b = draw(pool.utterances_of(r.speaker_b), 2);
  r.utterance_ids = {from_a[0], from_b[0], from_a[1], from_b[1], from_a[2]};

  std::array<double, kSequenceUtterances> speech{};
  for (std::size_t k = 0; k < kSequenceUtterances; ++k) {
    const auto& meta = pool.info(r.utterance_ids[k]);
    speech[k] = static_cast<double>(trimmed_geometry(meta, r.taper).speech()) / meta.sample_rate;
  }
  for (std::size_t k = 0; k < kSequenceJoins; ++k) {
    auto& join = r.joins[k];
    join.kind = rng.uniform01() < config.pause_probability ? JoinKind::kPause
                                                           : JoinKind::kOverlap;
    join.amount = rng.uniform01() * config.max_amount;
    if (join.kind == JoinKind::kOverlap) {
      // Uniform on the shorter admissible range, i.e. rejection sampling
      // done in one draw.
      const double limit = std::min(speech[k], speech[k + 1]) - 1.0 / config.sample_rate;
      if (join.amount > limit) join.amount = rng.uniform01() * std::max(0.0, limit);
    }
  }
  return r;
}

std::vector<SynthRecipe> plan_corpus(UtterancePool& pool, std::size_t n_sequences,
                                     std::uint64_t seed, const SynthConfig& config) {
  std::vector<SynthRecipe> recipes;
  recipes.reserve(n_sequences);
  for (std::size_t i = 0; i < n_sequences; ++i) {
    recipes.push_back(plan_sequence(pool, i, seed, config));
  }
  return recipes;
}

double sequence_duration(UtterancePool& pool, const SynthRecipe& recipe) {
  std::vector<Geometry> parts;
  std::uint32_t rate = 0;
  for (const auto& id : recipe.utterance_ids) {
    const auto& meta = pool.info(id);
    rate = meta.sample_rate;
    parts.push_back(trimmed_geometry(meta, recipe.taper));
  }
  return static_cast<double>(layout(parts, recipe, rate).total) / rate;
}

SynthSequence render_sequence(UtterancePool& pool, const SynthRecipe& recipe) {
  std::vector<Utterance> utts;
  for (const auto& id : recipe.utterance_ids) {
    utts.push_back(trim_and_taper(pool.load(id), recipe.taper));
  }
  return compose_sequence(utts, recipe);
}

CorpusManifest write_corpus(UtterancePool& pool,
                            const std::vector<SynthRecipe>& recipes,
                            const fs::path& out_dir) {
  fs::create_directories(out_dir);
  CorpusManifest manifest;
  std::string lines;
  for (const auto& recipe : recipes) {
    const SynthSequence seq = render_sequence(pool, recipe);
    write_wav((out_dir / (recipe.name() + ".wav")).string(), seq.audio);
    write_text_file((out_dir / (recipe.name() + ".rttm")).string(),
                    write_rttm(seq.timeline));
    manifest.total_duration += seq.audio.duration();
    manifest.recipes.push_back(recipe);
    lines += recipe_to_json(recipe);
    lines += '\n';
  }
  write_text_file((out_dir / "manifest.jsonl").string(), lines);
  return manifest;
}

CorpusManifest build_corpus(UtterancePool& pool, std::size_t n_sequences,
                            std::uint64_t seed, const fs::path& out_dir,
                            const SynthConfig& config) {
  return write_corpus(pool, plan_corpus(pool, n_sequences, seed, config), out_dir);
}

std::vector<SynthRecipe> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::vector<SynthRecipe> recipes;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    recipes.push_back(recipe_from_json(line));
  }
  return recipes;
}

}  // namespace scdkit
