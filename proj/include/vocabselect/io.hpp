#pragma once

// io.hpp -- text formats (count files, weights reports, ranked
// vocabularies, curve CSV), the flat key=value run configuration, and the
// synthetic-corpus spec file.  All output is UTF-8 with LF line endings and
// locale-independent number formatting.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vocabselect/corpus.hpp"
#include "vocabselect/eval.hpp"
#include "vocabselect/synth.hpp"
#include "vocabselect/weights.hpp"

namespace vocabselect {

// printf-style %.{digits}g / %.{digits}f in the C locale
std::string format_sig(double value, int significant_digits);
std::string format_fixed(double value, int fraction_digits);

// ---- count files: one `word<TAB>count` record per line, words in
// lexicographic order, `#` lines are comments ----
void write_count_file(std::ostream &out, const CorpusProfile &profile);
CorpusProfile read_count_file(std::istream &in, std::string corpus_id);

// ---- weights report: `corpus_id<TAB>lambda<TAB>distance-or-NA` per
// corpus, then `# method=<m> iterations=<n> loglik=<x>` ----
void write_weights_report(std::ostream &out, std::span<const std::string> corpus_ids,
                          const MixtureWeights &weights);
MixtureWeights read_weights_report(std::istream &in, std::vector<std::string> *corpus_ids);

// ---- ranked vocabulary: `rank<TAB>word<TAB>score`, scores to 12
// significant digits ----
void write_ranked_vocabulary(std::ostream &out, const RankedVocabulary &ranked);

// ---- curve CSV: `vocab_size,oov_rate` for one curve or
// `vocab_size,oov_rate_<label>...` for several; rates with 6 fractional
// digits.  All curves must share one size grid. ----
void write_curve_csv(std::ostream &out, std::span<const std::string> labels,
                     std::span<const OovCurve> curves);

// ---- run configuration ----
struct RunConfig {
    // (name, files), in the order the config first names each corpus
    std::vector<std::pair<std::string, std::vector<std::filesystem::path>>> train;
    std::vector<std::filesystem::path> heldout_segments; // one segment per file
    std::vector<std::filesystem::path> dev_files;        // single-split mode
    std::vector<std::filesystem::path> test_files;       // single-split mode
    std::optional<std::string> method;
    std::optional<std::string> em_update;
    std::optional<double> em_threshold;
    std::optional<int> em_max_iterations;
    std::optional<std::string> kl_direction;
    bool fold_case = true;
    std::optional<std::string> sizes;
    std::optional<std::string> out;
};

// Flat `key = value` file; `train.<name>` keys accumulate file lists and
// relative paths are resolved against the config file's directory.
// Unknown keys are an error.
RunConfig load_run_config(const std::filesystem::path &path);

// Checks that every referenced file exists and that at least one training
// corpus and one held-out (or dev/test) file is present.
void validate_run_config(const RunConfig &config);

// ---- size grids ----
// Accepts `log:<lo>:<hi>:<points>` (hi may be the word `union`) or an
// explicit comma-separated strictly increasing list (entries may be
// `union`).  union_size substitutes for the placeholder.
std::vector<std::uint64_t> parse_size_spec(std::string_view spec, std::uint64_t union_size);

// ---- synthetic-corpus spec file (key = value, same syntax as the run
// config) ----
SynthSpec load_synth_spec(const std::filesystem::path &path);

// whitespace-trimmed key=value pairs, comments stripped; shared by the
// config loaders
std::vector<std::pair<std::string, std::string>>
parse_kv_file(const std::filesystem::path &path);

} // namespace vocabselect
