// io.cpp -- text formats and configuration files.

#include "vocabselect/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "vocabselect/errors.hpp"

namespace vocabselect {

namespace {

std::string_view trim(std::string_view s)
{
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && is_space(s.front()))
        s.remove_prefix(1);
    while (!s.empty() && is_space(s.back()))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_fields(std::string_view s)
{
    std::vector<std::string> fields;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
            ++i;
        std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t')
            ++i;
        if (i > start)
            fields.emplace_back(s.substr(start, i - start));
    }
    return fields;
}

double parse_double(std::string_view s, const std::string &what)
{
    try {
        std::size_t used = 0;
        const double value = std::stod(std::string(s), &used);
        if (used != s.size())
            throw std::invalid_argument("trailing characters");
        return value;
    } catch (const std::exception &) {
        throw ConfigError("cannot parse " + what + " '" + std::string(s) + "' as a number");
    }
}

std::uint64_t parse_uint(std::string_view s, const std::string &what)
{
    try {
        std::size_t used = 0;
        const long long value = std::stoll(std::string(s), &used);
        if (used != s.size() || value < 0)
            throw std::invalid_argument("not a nonnegative integer");
        return static_cast<std::uint64_t>(value);
    } catch (const std::exception &) {
        throw ConfigError("cannot parse " + what + " '" + std::string(s) +
                          "' as a nonnegative integer");
    }
}

bool parse_bool(std::string_view s, const std::string &what)
{
    if (s == "true" || s == "yes" || s == "on" || s == "1")
        return true;
    if (s == "false" || s == "no" || s == "off" || s == "0")
        return false;
    throw ConfigError("cannot parse " + what + " '" + std::string(s) + "' as a boolean");
}

std::vector<std::filesystem::path> resolve_paths(const std::vector<std::string> &fields,
                                                 const std::filesystem::path &base)
{
    std::vector<std::filesystem::path> paths;
    paths.reserve(fields.size());
    for (const auto &field : fields) {
        std::filesystem::path p(field);
        paths.push_back(p.is_absolute() ? p : base / p);
    }
    return paths;
}

} // namespace

std::string format_sig(double value, int significant_digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant_digits, value);
    return buf;
}

std::string format_fixed(double value, int fraction_digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", fraction_digits, value);
    return buf;
}

void write_count_file(std::ostream &out, const CorpusProfile &profile)
{
    for (const auto &[word, count] : profile.raw_counts)
        out << word << '\t' << count << '\n';
}

CorpusProfile read_count_file(std::istream &in, std::string corpus_id)
{
    CorpusProfile profile;
    profile.corpus_id = std::move(corpus_id);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#')
            continue;
        const auto tab = stripped.find('\t');
        if (tab == std::string_view::npos)
            throw ConfigError("count file line " + std::to_string(lineno) +
                              ": expected word<TAB>count");
        const std::string word(trim(stripped.substr(0, tab)));
        const std::uint64_t count =
            parse_uint(trim(stripped.substr(tab + 1)), "count on line " + std::to_string(lineno));
        if (word.empty() || count == 0)
            throw ConfigError("count file line " + std::to_string(lineno) +
                              ": empty word or zero count");
        profile.raw_counts[word] += count;
        profile.token_count += count;
    }
    return profile;
}

void write_weights_report(std::ostream &out, std::span<const std::string> corpus_ids,
                          const MixtureWeights &weights)
{
    for (std::size_t j = 0; j < weights.lambdas.size(); ++j) {
        const std::string id = j < corpus_ids.size() ? corpus_ids[j] : "corpus" + std::to_string(j + 1);
        out << id << '\t' << format_sig(weights.lambdas[j], 12) << '\t';
        if (weights.distances)
            out << format_sig((*weights.distances)[j], 12);
        else
            out << "NA";
        out << '\n';
    }
    out << "# method=" << method_name(weights.method) << " iterations=" << weights.iterations
        << " loglik=";
    if (std::isnan(weights.final_log_likelihood))
        out << "NA";
    else
        out << format_sig(weights.final_log_likelihood, 12);
    out << '\n';
}

MixtureWeights read_weights_report(std::istream &in, std::vector<std::string> *corpus_ids)
{
    MixtureWeights weights;
    std::vector<double> distances;
    bool any_distance = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view stripped = trim(line);
        if (stripped.empty())
            continue;
        if (stripped.front() == '#') {
            for (const auto &field : split_fields(stripped.substr(1))) {
                const auto eq = field.find('=');
                if (eq == std::string::npos)
                    continue;
                const std::string key = field.substr(0, eq);
                const std::string value = field.substr(eq + 1);
                if (key == "method")
                    weights.method = parse_method(value);
                else if (key == "iterations")
                    weights.iterations = static_cast<int>(parse_uint(value, "iterations"));
                else if (key == "loglik" && value != "NA")
                    weights.final_log_likelihood = parse_double(value, "loglik");
            }
            continue;
        }
        const auto fields = split_fields(stripped);
        if (fields.size() != 3)
            throw ConfigError("weights report line " + std::to_string(lineno) +
                              ": expected corpus_id<TAB>lambda<TAB>distance-or-NA");
        if (corpus_ids != nullptr)
            corpus_ids->push_back(fields[0]);
        weights.lambdas.push_back(parse_double(fields[1], "lambda"));
        if (fields[2] == "NA") {
            distances.push_back(std::numeric_limits<double>::quiet_NaN());
        } else {
            distances.push_back(parse_double(fields[2], "distance"));
            any_distance = true;
        }
    }
    if (weights.lambdas.empty())
        throw ConfigError("weights report contains no corpora");
    if (any_distance)
        weights.distances = std::move(distances);
    return weights;
}

void write_ranked_vocabulary(std::ostream &out, const RankedVocabulary &ranked)
{
    for (std::size_t i = 0; i < ranked.entries.size(); ++i)
        out << (i + 1) << '\t' << ranked.entries[i].first << '\t'
            << format_sig(ranked.entries[i].second, 12) << '\n';
}

void write_curve_csv(std::ostream &out, std::span<const std::string> labels,
                     std::span<const OovCurve> curves)
{
    if (curves.empty())
        throw ConfigError("no curves to write");
    for (const auto &curve : curves)
        if (curve.points.size() != curves.front().points.size())
            throw ConfigError("curves use different size grids");

    if (curves.size() == 1) {
        out << "vocab_size,oov_rate\n";
    } else {
        out << "vocab_size";
        for (const auto &label : labels)
            out << ",oov_rate_" << label;
        out << '\n';
    }
    for (std::size_t p = 0; p < curves.front().points.size(); ++p) {
        out << curves.front().points[p].first;
        for (const auto &curve : curves)
            out << ',' << format_fixed(curve.points[p].second, 6);
        out << '\n';
    }
}

std::vector<std::pair<std::string, std::string>>
parse_kv_file(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path.string() + "'");
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#')
            continue;
        const auto eq = stripped.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key(trim(stripped.substr(0, eq)));
        const std::string value(trim(stripped.substr(eq + 1)));
        if (key.empty())
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": empty key");
        pairs.emplace_back(key, value);
    }
    return pairs;
}

RunConfig load_run_config(const std::filesystem::path &path)
{
    RunConfig config;
    const std::filesystem::path base = path.has_parent_path()
                                           ? path.parent_path()
                                           : std::filesystem::path(".");

    for (const auto &[key, value] : parse_kv_file(path)) {
        if (key.starts_with("train.")) {
            const std::string name = key.substr(6);
            if (name.empty())
                throw ConfigError("training corpus key without a name in '" + path.string() + "'");
            auto it = std::find_if(config.train.begin(), config.train.end(),
                                   [&](const auto &entry) { return entry.first == name; });
            if (it == config.train.end()) {
                config.train.emplace_back(name, std::vector<std::filesystem::path>{});
                it = std::prev(config.train.end());
            }
            for (auto &p : resolve_paths(split_fields(value), base))
                it->second.push_back(std::move(p));
        } else if (key == "heldout") {
            for (auto &p : resolve_paths(split_fields(value), base))
                config.heldout_segments.push_back(std::move(p));
        } else if (key == "dev") {
            for (auto &p : resolve_paths(split_fields(value), base))
                config.dev_files.push_back(std::move(p));
        } else if (key == "test") {
            for (auto &p : resolve_paths(split_fields(value), base))
                config.test_files.push_back(std::move(p));
        } else if (key == "method") {
            config.method = value;
        } else if (key == "em.update") {
            config.em_update = value;
        } else if (key == "em.threshold") {
            config.em_threshold = parse_double(value, "em.threshold");
        } else if (key == "em.max-iters") {
            config.em_max_iterations = static_cast<int>(parse_uint(value, "em.max-iters"));
        } else if (key == "kl.direction") {
            config.kl_direction = value;
        } else if (key == "fold-case") {
            config.fold_case = parse_bool(value, "fold-case");
        } else if (key == "sizes") {
            config.sizes = value;
        } else if (key == "out") {
            config.out = value;
        } else {
            throw ConfigError("unknown config key '" + key + "' in '" + path.string() + "'");
        }
    }
    return config;
}

void validate_run_config(const RunConfig &config)
{
    if (config.train.empty())
        throw ConfigError("config names no training corpora (train.<name> = files...)");
    for (const auto &[name, files] : config.train) {
        if (files.empty())
            throw ConfigError("training corpus '" + name + "' lists no files");
        for (const auto &file : files)
            if (!std::filesystem::exists(file))
                throw ConfigError("training file '" + file.string() + "' does not exist");
    }
    if (config.heldout_segments.empty() && config.dev_files.empty())
        throw ConfigError("config names no held-out data (heldout = files..., or dev/test)");
    for (const auto &file : config.heldout_segments)
        if (!std::filesystem::exists(file))
            throw ConfigError("held-out file '" + file.string() + "' does not exist");
    for (const auto &file : config.dev_files)
        if (!std::filesystem::exists(file))
            throw ConfigError("dev file '" + file.string() + "' does not exist");
    for (const auto &file : config.test_files)
        if (!std::filesystem::exists(file))
            throw ConfigError("test file '" + file.string() + "' does not exist");
}

std::vector<std::uint64_t> parse_size_spec(std::string_view spec, std::uint64_t union_size)
{
    const auto parse_bound = [&](std::string_view field) -> std::uint64_t {
        if (field == "union" || field == "UNION")
            return union_size;
        return parse_uint(field, "vocabulary size");
    };

    spec = trim(spec);
    if (spec.empty())
        throw ConfigError("empty size specification");

    if (spec.starts_with("log:")) {
        std::vector<std::string> parts;
        std::string_view rest = spec.substr(4);
        while (!rest.empty()) {
            const auto colon = rest.find(':');
            parts.emplace_back(rest.substr(0, colon));
            if (colon == std::string_view::npos)
                break;
            rest.remove_prefix(colon + 1);
        }
        if (parts.size() != 3)
            throw ConfigError("log size spec must be log:<lo>:<hi>:<points>");
        const std::uint64_t lo = parse_bound(parts[0]);
        const std::uint64_t hi = parse_bound(parts[1]);
        const std::uint64_t points = parse_uint(parts[2], "point count");
        return log_size_grid(lo, hi, static_cast<std::size_t>(points));
    }

    std::vector<std::uint64_t> sizes;
    std::string_view rest = spec;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view field = trim(rest.substr(0, comma));
        if (field.empty())
            throw ConfigError("empty entry in size list");
        sizes.push_back(parse_bound(field));
        if (comma == std::string_view::npos)
            break;
        rest.remove_prefix(comma + 1);
    }
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] == 0)
            throw ConfigError("vocabulary size must be positive");
        if (i > 0 && sizes[i] <= sizes[i - 1])
            throw ConfigError("size list must be strictly increasing");
    }
    return sizes;
}

SynthSpec load_synth_spec(const std::filesystem::path &path)
{
    SynthSpec spec;
    std::vector<std::string> names;
    std::vector<std::uint64_t> vocab_sizes;
    std::vector<std::uint64_t> token_counts;
    std::vector<double> exponents;

    for (const auto &[key, value] : parse_kv_file(path)) {
        const auto fields = split_fields(value);
        if (key == "corpora") {
            names = fields;
        } else if (key == "vocab-size") {
            for (const auto &field : fields)
                vocab_sizes.push_back(parse_uint(field, "vocab-size"));
        } else if (key == "tokens") {
            for (const auto &field : fields)
                token_counts.push_back(parse_uint(field, "tokens"));
        } else if (key == "zipf-exponent") {
            for (const auto &field : fields)
                exponents.push_back(parse_double(field, "zipf-exponent"));
        } else if (key == "overlap") {
            spec.overlap = parse_double(value, "overlap");
        } else if (key == "mixture") {
            for (const auto &field : fields)
                spec.mixture.push_back(parse_double(field, "mixture"));
        } else if (key == "segments") {
            spec.segments = static_cast<std::size_t>(parse_uint(value, "segments"));
        } else if (key == "segment-tokens") {
            spec.segment_tokens = parse_uint(value, "segment-tokens");
        } else if (key == "seed") {
            spec.seed = parse_uint(value, "seed");
        } else {
            throw ConfigError("unknown synth key '" + key + "' in '" + path.string() + "'");
        }
    }

    if (names.empty())
        throw ConfigError("synth spec names no corpora (corpora = name...)");
    const auto broadcast = [&](auto &values, const char *what) {
        if (values.size() == 1)
            values.resize(names.size(), values.front());
        if (values.size() != names.size())
            throw ConfigError(std::string(what) + " needs one value, or one per corpus");
    };
    if (vocab_sizes.empty() || token_counts.empty())
        throw ConfigError("synth spec needs vocab-size and tokens");
    if (exponents.empty())
        exponents.push_back(1.0);
    broadcast(vocab_sizes, "vocab-size");
    broadcast(token_counts, "tokens");
    broadcast(exponents, "zipf-exponent");

    for (std::size_t j = 0; j < names.size(); ++j) {
        SynthComponent component;
        component.name = names[j];
        component.vocab_size = static_cast<std::uint32_t>(vocab_sizes[j]);
        component.tokens = token_counts[j];
        component.zipf_exponent = exponents[j];
        spec.components.push_back(std::move(component));
    }
    return spec;
}

} // namespace vocabselect
