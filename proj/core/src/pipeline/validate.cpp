#include "forge/pipeline/validate.hpp"

#include "forge/domain/codec.hpp"
#include "forge/domain/corpus.hpp"
#include "forge/util/error.hpp"
#include "forge/util/jsonl.hpp"

namespace forge::pipeline {

namespace fs = std::filesystem;

CorpusFiles CorpusFiles::in_dir(const fs::path& dir) {
  CorpusFiles f;
  auto pick = [&](std::string_view name) -> std::optional<fs::path> {
    const auto p = dir / std::string(name);
    return fs::exists(p) ? std::optional<fs::path>(p) : std::nullopt;
  };
  f.characters = pick(kCharactersFile);
  f.images = pick(kImagesFile);
  f.dialogues = pick(kDialoguesFile);
  f.samples = pick(kSamplesFile);
  f.test_samples = pick(kTestSamplesFile);
  return f;
}

namespace {

template <typename T, typename Decode>
std::vector<T> decode_file(const std::optional<fs::path>& path, Decode decode, ValidationReport& report) {
  std::vector<T> out;
  if (!path) return out;
  std::vector<json> rows;
  try {
    rows = read_jsonl(*path);
  } catch (const Error& e) {
    report.add(path->filename().string(), "file.read", e.what());
    return out;
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    try {
      out.push_back(decode(rows[i], Strictness::Strict));
    } catch (const Error& e) {
      report.add(path->filename().string() + ":" + std::to_string(i + 1), "record.schema", e.what());
    }
  }
  return out;
}

}  // namespace

ValidationReport validate_files(const CorpusFiles& files) {
  ValidationReport report;
  auto characters = decode_file<Character>(files.characters, character_from_json, report);
  auto images = decode_file<ImageRecord>(files.images, image_from_json, report);
  auto dialogues = decode_file<Dialogue>(files.dialogues, dialogue_from_json, report);
  const auto samples = decode_file<TrainingSample>(files.samples, training_sample_from_json, report);
  const auto tests = decode_file<TestSample>(files.test_samples, test_sample_from_json, report);

  std::optional<Corpus> corpus;
  try {
    corpus.emplace(std::move(characters), std::move(images), std::move(dialogues));
  } catch (const Error& e) {
    report.add("corpus", "corpus.ids", e.what());
    return report;
  }
  report.merge(validate_corpus(*corpus));
  report.merge(validate_training_samples(samples, *corpus));
  report.merge(validate_test_samples(tests, *corpus));
  return report;
}

}  // namespace forge::pipeline
