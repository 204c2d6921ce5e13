// vocabselect -- select a target-domain vocabulary from multiple corpora.
//
// Subcommands: count, weights, rank, curve, synth.  Exit codes: 0 success,
// 2 usage/config error, 3 estimation error.  Data goes to --out (or stdout
// when no path is given); diagnostics go to stderr.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vocabselect/corpus.hpp"
#include "vocabselect/errors.hpp"
#include "vocabselect/eval.hpp"
#include "vocabselect/io.hpp"
#include "vocabselect/synth.hpp"
#include "vocabselect/vocab.hpp"
#include "vocabselect/weights.hpp"

namespace fs = std::filesystem;
using namespace vocabselect;

namespace {

std::string read_file(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open input file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad())
        throw ConfigError("failed reading '" + path.string() + "'");
    return buffer.str();
}

CorpusProfile count_one_file(const fs::path &path, bool fold_case)
{
    const std::string text = read_file(path);
    try {
        const auto tokens = tokenize(text, {.fold_case = fold_case});
        return count_tokens(tokens, path.filename().string());
    } catch (const ConfigError &e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

// Files are independent shards; count them in parallel and merge in file
// order.  Counts are integers, so the merge is exact and the result does
// not depend on the schedule.
CorpusProfile load_corpus(const std::string &corpus_id, std::span<const fs::path> files,
                          bool fold_case)
{
    std::vector<CorpusProfile> parts(files.size());
    std::vector<std::string> failures(files.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(files.size()); ++i) {
        try {
            parts[i] = count_one_file(files[i], fold_case);
        } catch (const std::exception &e) {
            failures[i] = e.what();
        }
    }
    for (const auto &failure : failures)
        if (!failure.empty())
            throw ConfigError(failure);
    return merge_profiles(parts, corpus_id);
}

std::vector<CorpusProfile> load_training_corpora(const RunConfig &config)
{
    std::vector<CorpusProfile> train;
    train.reserve(config.train.size());
    for (const auto &[name, files] : config.train)
        train.push_back(load_corpus(name, files, config.fold_case));
    return train;
}

std::vector<CorpusProfile> load_heldout_segments(const RunConfig &config)
{
    std::vector<CorpusProfile> segments;
    segments.reserve(config.heldout_segments.size());
    for (const auto &file : config.heldout_segments)
        segments.push_back(load_corpus(file.filename().string(), {&file, 1}, config.fold_case));
    return segments;
}

template <class Fn>
void with_output(const std::optional<std::string> &path, Fn fn)
{
    if (!path) {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot open output file '" + *path + "'");
    fn(out);
    out.flush();
    if (!out)
        throw ConfigError("failed writing '" + *path + "'");
}

struct EstimatorFlags {
    std::string method;
    std::string em_update;
    double em_threshold = -1.0;
    int em_max_iterations = -1;
    std::string kl_direction;
};

void add_estimator_flags(CLI::App *cmd, EstimatorFlags &flags)
{
    cmd->add_option("--method", flags.method, "ml|euclidean|kl|uniform");
    cmd->add_option("--em-update", flags.em_update, "EM update rule: standard|figure1");
    cmd->add_option("--em-threshold", flags.em_threshold,
                    "EM convergence threshold on max |dlambda|");
    cmd->add_option("--em-max-iters", flags.em_max_iterations, "EM iteration cap");
    cmd->add_option("--kl-direction", flags.kl_direction,
                    "KL argument order: h2t (held-out first) or t2h");
}

EstimatorSpec make_estimator_spec(const RunConfig &config, const EstimatorFlags &flags)
{
    EstimatorSpec spec;
    std::string method = "ml";
    if (config.method)
        method = *config.method;
    if (!flags.method.empty())
        method = flags.method;
    spec.method = parse_method(method);

    std::string update = config.em_update.value_or("standard");
    if (!flags.em_update.empty())
        update = flags.em_update;
    if (update == "standard")
        spec.em.update_rule = EmUpdateRule::kStandard;
    else if (update == "figure1")
        spec.em.update_rule = EmUpdateRule::kCorpusPosterior;
    else
        throw ConfigError("unknown EM update rule '" + update + "' (expected standard|figure1)");

    if (config.em_threshold)
        spec.em.convergence_threshold = *config.em_threshold;
    if (flags.em_threshold > 0.0)
        spec.em.convergence_threshold = flags.em_threshold;
    if (spec.em.convergence_threshold <= 0.0)
        throw ConfigError("EM threshold must be positive");

    if (config.em_max_iterations)
        spec.em.max_iterations = *config.em_max_iterations;
    if (flags.em_max_iterations > 0)
        spec.em.max_iterations = flags.em_max_iterations;
    if (spec.em.max_iterations < 1)
        throw ConfigError("EM iteration cap must be at least 1");

    std::string direction = config.kl_direction.value_or("h2t");
    if (!flags.kl_direction.empty())
        direction = flags.kl_direction;
    if (direction == "h2t")
        spec.kl_direction = KlDirection::kHeldoutToTrain;
    else if (direction == "t2h")
        spec.kl_direction = KlDirection::kTrainToHeldout;
    else
        throw ConfigError("unknown KL direction '" + direction + "' (expected h2t|t2h)");
    return spec;
}

std::vector<std::string> train_names(const RunConfig &config)
{
    std::vector<std::string> names;
    names.reserve(config.train.size());
    for (const auto &[name, files] : config.train)
        names.push_back(name);
    return names;
}

// ---- count ----

int run_count(const std::vector<std::string> &inputs, const std::optional<std::string> &out,
              bool no_fold)
{
    std::vector<fs::path> files(inputs.begin(), inputs.end());
    const CorpusProfile profile = load_corpus("counts", files, !no_fold);
    with_output(out, [&](std::ostream &os) { write_count_file(os, profile); });
    return 0;
}

// ---- weights ----

int run_weights(const std::string &config_path, const EstimatorFlags &flags,
                const std::optional<std::string> &out)
{
    const RunConfig config = load_run_config(config_path);
    validate_run_config(config);
    const EstimatorSpec spec = make_estimator_spec(config, flags);

    const std::vector<CorpusProfile> train = load_training_corpora(config);

    // full held-out data, no folds
    std::vector<fs::path> heldout_files = config.heldout_segments;
    heldout_files.insert(heldout_files.end(), config.dev_files.begin(), config.dev_files.end());
    heldout_files.insert(heldout_files.end(), config.test_files.begin(), config.test_files.end());
    const CorpusProfile heldout = load_corpus("heldout", heldout_files, config.fold_case);

    const MixtureWeights weights = estimate_weights(train, heldout, spec);
    const std::vector<std::string> names = train_names(config);
    with_output(out, [&](std::ostream &os) { write_weights_report(os, names, weights); });
    return 0;
}

// ---- rank ----

int run_rank(const std::string &config_path, const std::string &weights_path,
             const std::optional<std::string> &out)
{
    const RunConfig config = load_run_config(config_path);
    if (config.train.empty())
        throw ConfigError("config names no training corpora (train.<name> = files...)");
    for (const auto &[name, files] : config.train)
        for (const auto &file : files)
            if (!fs::exists(file))
                throw ConfigError("training file '" + file.string() + "' does not exist");

    std::ifstream in(weights_path);
    if (!in)
        throw ConfigError("cannot open weights file '" + weights_path + "'");
    std::vector<std::string> report_ids;
    const MixtureWeights report = read_weights_report(in, &report_ids);

    const std::vector<CorpusProfile> train = load_training_corpora(config);

    // align the report's corpora with the config's order
    MixtureWeights weights = report;
    weights.lambdas.assign(train.size(), 0.0);
    std::vector<bool> used(report_ids.size(), false);
    for (std::size_t j = 0; j < train.size(); ++j) {
        bool found = false;
        for (std::size_t k = 0; k < report_ids.size(); ++k) {
            if (!used[k] && report_ids[k] == train[j].corpus_id) {
                weights.lambdas[j] = report.lambdas[k];
                used[k] = found = true;
                break;
            }
        }
        if (!found)
            throw ConfigError("weights file lists no corpus '" + train[j].corpus_id + "'");
    }
    if (report_ids.size() != train.size())
        throw ConfigError("weights file lists " + std::to_string(report_ids.size()) +
                          " corpora, config has " + std::to_string(train.size()));

    const RankedVocabulary ranked = score_and_rank(train, weights);
    with_output(out, [&](std::ostream &os) { write_ranked_vocabulary(os, ranked); });
    return 0;
}

// ---- curve ----

void write_fold_reports(std::ostream &os, const std::vector<std::string> &names,
                        const CrossValidationResult &cv, Method method)
{
    for (std::size_t f = 0; f < cv.folds.size(); ++f) {
        os << "# fold=" << (f + 1) << " test=" << cv.folds[f].test_segment << '\n';
        write_weights_report(os, names, cv.folds[f].weights);
    }
    os << "# fold=mean folds=" << cv.folds.size() << '\n';
    for (std::size_t j = 0; j < names.size(); ++j) {
        os << names[j] << '\t' << format_sig(cv.mean_lambdas[j], 12) << '\t';
        if (cv.mean_distances)
            os << format_sig((*cv.mean_distances)[j], 12);
        else
            os << "NA";
        os << '\n';
    }
    os << "# method=" << method_name(method) << " folds=" << cv.folds.size() << '\n';
}

int run_curve(const std::string &config_path, const EstimatorFlags &flags, bool compare,
              bool single_split, const std::optional<std::string> &sizes_flag,
              const std::optional<std::string> &out_flag)
{
    const RunConfig config = load_run_config(config_path);
    validate_run_config(config);
    const EstimatorSpec base_spec = make_estimator_spec(config, flags);
    const std::optional<std::string> out = out_flag ? out_flag : config.out;

    const std::vector<CorpusProfile> train = load_training_corpora(config);
    const std::uint64_t union_size = GlobalVocabulary::build(train)->size();

    std::string sizes_spec = "log:1:union:51";
    if (config.sizes)
        sizes_spec = *config.sizes;
    if (sizes_flag)
        sizes_spec = *sizes_flag;
    const std::vector<std::uint64_t> sizes = parse_size_spec(sizes_spec, union_size);

    std::vector<Method> methods;
    if (compare)
        methods = {Method::kMaxLikelihood, Method::kEuclidean, Method::kKl, Method::kUniform};
    else
        methods = {base_spec.method};

    const std::vector<std::string> names = train_names(config);
    std::vector<std::string> labels;
    std::vector<OovCurve> curves;
    std::vector<CrossValidationResult> results;

    if (single_split) {
        if (config.dev_files.empty() || config.test_files.empty())
            throw ConfigError("single-split mode needs dev = files... and test = files...");
        const CorpusProfile dev = load_corpus("dev", config.dev_files, config.fold_case);
        const CorpusProfile test = load_corpus("test", config.test_files, config.fold_case);
        for (const Method method : methods) {
            EstimatorSpec spec = base_spec;
            spec.method = method;
            CrossValidationResult single;
            FoldResult fold;
            fold.test_index = 0;
            fold.test_segment = test.corpus_id;
            fold.weights = estimate_weights(train, dev, spec);
            const RankedVocabulary ranked = score_and_rank(train, fold.weights);
            fold.curve = oov_curve(ranked, test, sizes);
            single.averaged = fold.curve;
            single.averaged.split_count = 1;
            single.mean_lambdas = fold.weights.lambdas;
            single.mean_distances = fold.weights.distances;
            single.folds.push_back(std::move(fold));
            labels.emplace_back(method_name(method));
            curves.push_back(single.averaged);
            results.push_back(std::move(single));
        }
    } else {
        const std::vector<CorpusProfile> segments = load_heldout_segments(config);
        if (segments.size() < 2)
            throw ConfigError("cross-validation needs at least 2 held-out segments "
                              "(use --single with dev/test for one split)");
        for (const Method method : methods) {
            EstimatorSpec spec = base_spec;
            spec.method = method;
            CrossValidationResult cv = cross_validate(train, segments, spec, sizes);
            labels.emplace_back(method_name(method));
            curves.push_back(cv.averaged);
            results.push_back(std::move(cv));
        }
    }

    with_output(out, [&](std::ostream &os) { write_curve_csv(os, labels, curves); });

    // per-fold weight reports, next to the curve when it goes to a file
    if (out) {
        for (std::size_t k = 0; k < methods.size(); ++k) {
            const std::string report_path =
                compare ? *out + "." + labels[k] + ".weights.tsv" : *out + ".weights.tsv";
            std::ofstream os(report_path, std::ios::binary);
            if (!os)
                throw ConfigError("cannot open output file '" + report_path + "'");
            write_fold_reports(os, names, results[k], methods[k]);
        }
    }
    return 0;
}

// ---- synth ----

void write_token_file(const fs::path &path, std::span<const std::string> tokens)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot open output file '" + path.string() + "'");
    constexpr std::size_t kTokensPerLine = 12;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        out << tokens[i];
        out << ((i + 1) % kTokensPerLine == 0 || i + 1 == tokens.size() ? '\n' : ' ');
    }
    out.flush();
    if (!out)
        throw ConfigError("failed writing '" + path.string() + "'");
}

int run_synth(std::uint64_t seed, const std::string &spec_path, const std::string &out_dir)
{
    SynthSpec spec = load_synth_spec(spec_path);
    spec.seed = seed;
    const SynthResult result = generate_corpora(spec);

    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw ConfigError("cannot create output directory '" + dir.string() + "'");

    for (std::size_t j = 0; j < result.component_names.size(); ++j)
        write_token_file(dir / (result.component_names[j] + ".txt"), result.component_tokens[j]);

    std::vector<std::string> segment_files;
    for (std::size_t s = 0; s < result.segment_tokens.size(); ++s) {
        char name[32];
        std::snprintf(name, sizeof name, "heldout_%02zu.txt", s + 1);
        segment_files.emplace_back(name);
        write_token_file(dir / name, result.segment_tokens[s]);
    }

    std::ofstream cfg(dir / "run.cfg", std::ios::binary);
    if (!cfg)
        throw ConfigError("cannot open output file '" + (dir / "run.cfg").string() + "'");
    cfg << "# generated by vocabselect synth (seed " << spec.seed << ")\n";
    for (const auto &name : result.component_names)
        cfg << "train." << name << " = " << name << ".txt\n";
    cfg << "heldout =";
    for (const auto &file : segment_files)
        cfg << ' ' << file;
    cfg << "\nmethod = ml\n";
    cfg.flush();
    if (!cfg)
        throw ConfigError("failed writing '" + (dir / "run.cfg").string() + "'");
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"vocabulary selection from heterogeneous text corpora"};
    app.require_subcommand(1);

    // count
    auto *count_cmd = app.add_subcommand("count", "tokenize files and write word counts");
    std::vector<std::string> count_inputs;
    std::string count_out;
    bool count_no_fold = false;
    count_cmd->add_option("--in", count_inputs, "input text files")->required()->expected(-1);
    count_cmd->add_option("--out", count_out, "output count file (stdout when omitted)");
    count_cmd->add_flag("--no-fold", count_no_fold, "keep letter case");

    // weights
    auto *weights_cmd = app.add_subcommand("weights", "estimate interpolation weights");
    std::string weights_config, weights_out;
    EstimatorFlags weights_flags;
    weights_cmd->add_option("--config", weights_config, "run config file")->required();
    add_estimator_flags(weights_cmd, weights_flags);
    weights_cmd->add_option("--out", weights_out, "output weights report (stdout when omitted)");

    // rank
    auto *rank_cmd = app.add_subcommand("rank", "rank the candidate vocabulary");
    std::string rank_config, rank_weights, rank_out;
    rank_cmd->add_option("--config", rank_config, "run config file")->required();
    rank_cmd->add_option("--weights", rank_weights, "weights report to apply")->required();
    rank_cmd->add_option("--out", rank_out, "output vocabulary file (stdout when omitted)");

    // curve
    auto *curve_cmd = app.add_subcommand("curve", "OOV rate versus vocabulary size");
    std::string curve_config, curve_sizes, curve_out;
    EstimatorFlags curve_flags;
    bool curve_compare = false, curve_single = false;
    curve_cmd->add_option("--config", curve_config, "run config file")->required();
    add_estimator_flags(curve_cmd, curve_flags);
    curve_cmd->add_flag("--compare", curve_compare, "run all four methods on identical folds");
    curve_cmd->add_flag("--single", curve_single, "one explicit dev/test split instead of folds");
    curve_cmd->add_option("--sizes", curve_sizes, "size grid, e.g. log:1:union:51 or 1,10,100");
    curve_cmd->add_option("--out", curve_out, "output CSV (stdout when omitted)");

    // synth
    auto *synth_cmd = app.add_subcommand("synth", "generate synthetic Zipfian corpora");
    std::uint64_t synth_seed = 0;
    std::string synth_spec, synth_out_dir;
    synth_cmd->add_option("--seed", synth_seed, "random seed")->required();
    synth_cmd->add_option("--spec", synth_spec, "synth spec file")->required();
    synth_cmd->add_option("--out-dir", synth_out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    const auto opt = [](const std::string &s) {
        return s.empty() ? std::optional<std::string>() : std::optional<std::string>(s);
    };

    try {
        if (app.got_subcommand(count_cmd))
            return run_count(count_inputs, opt(count_out), count_no_fold);
        if (app.got_subcommand(weights_cmd))
            return run_weights(weights_config, weights_flags, opt(weights_out));
        if (app.got_subcommand(rank_cmd))
            return run_rank(rank_config, rank_weights, opt(rank_out));
        if (app.got_subcommand(curve_cmd))
            return run_curve(curve_config, curve_flags, curve_compare, curve_single,
                             opt(curve_sizes), opt(curve_out));
        if (app.got_subcommand(synth_cmd))
            return run_synth(synth_seed, synth_spec, synth_out_dir);
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const EstimationError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
