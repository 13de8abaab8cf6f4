#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>

#include "chaoscipher/analysis.hpp"
#include "chaoscipher/attacks.hpp"
#include "chaoscipher/cipher.hpp"
#include "chaoscipher/entropy.hpp"
#include "chaoscipher/errors.hpp"
#include "chaoscipher/framing.hpp"
#include "chaoscipher/keyspace.hpp"

namespace chaoscipher::cli {

namespace {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RefusedOverwrite : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// std::random_device backed source; only the CLI touches system entropy.
class SystemEntropy final : public EntropySource {
public:
    void fill(std::span<std::uint8_t> out) override {
        for (auto& b : out) b = static_cast<std::uint8_t>(device_() & 0xFF);
    }

private:
    std::random_device device_;
};

std::unique_ptr<EntropySource> make_entropy(const std::string& spec) {
    if (spec == "system") return std::make_unique<SystemEntropy>();
    if (spec.rfind("fixed:", 0) == 0) return std::make_unique<FixedEntropy>(FixedEntropy::from_hex(spec.substr(6)));
    if (spec.rfind("seed:", 0) == 0) {
        std::uint64_t seed = 0;
        try {
            seed = std::stoull(spec.substr(5), nullptr, 0);
        } catch (const std::exception&) {
            throw UsageError("invalid entropy seed '" + spec.substr(5) + "'");
        }
        return std::make_unique<SeededEntropy>(seed);
    }
    throw UsageError("entropy must be system, fixed:HEX or seed:N");
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("error reading '" + path + "'");
    return data;
}

void write_file(const std::string& path, std::span<const std::uint8_t> data, bool force) {
    if (!force && std::filesystem::exists(path)) {
        throw RefusedOverwrite("'" + path + "' exists; pass --force to overwrite");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("error writing '" + path + "'");
}

void write_text(const std::string& path, const std::string& text, bool force) {
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()), force);
}

CipherKey load_key(const std::string& path) {
    const auto bytes = read_file(path);
    return parse_key(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

XprimeMode parse_mode(const std::string& s) {
    return s == "independent" ? XprimeMode::independent : XprimeMode::derived;
}

// Ciphertext body of a container whose geometry is assumed, not known.
std::vector<FxWord> container_body(std::span<const std::uint8_t> container, unsigned m, std::uint32_t dummy_len) {
    if (container.size() < kContainerMagic.size() ||
        !std::equal(kContainerMagic.begin(), kContainerMagic.end(), container.begin())) {
        throw ContainerError(ContainerError::Kind::bad_magic, "bad magic, not a CHS1 container");
    }
    const std::size_t skip = kContainerMagic.size() + std::size_t{dummy_len} * bytes_per_word(m);
    if (container.size() < skip) throw ContainerError(ContainerError::Kind::truncated, "container shorter than dummy region");
    return deserialize_words(container.subspan(skip), m);
}

struct Options {
    // keygen
    unsigned m = 16, k = 16, rounds = 1;
    std::uint32_t dummy = 32;
    std::string mode = "derived";
    std::string entropy = "system";
    std::string out_path;
    bool force = false;
    // encrypt / decrypt
    std::string key_path, in_path;
    // analyze
    std::string kind;
    std::size_t slots = analysis::kDefaultSlots, grid = 64;
    std::string csv_path;
    // attack
    std::string known_path, cipher_path;
    std::size_t window = 16, offset = 0;
    unsigned max_space_log2 = 26, threads = 0;
    std::size_t bytes = 10240, trials = 100;
};

int cmd_keygen(const Options& o, std::ostream& out) {
    if (!o.force && std::filesystem::exists(o.out_path)) {
        throw RefusedOverwrite("'" + o.out_path + "' exists; pass --force to overwrite");
    }
    auto entropy = make_entropy(o.entropy);
    KeygenParams p{o.m, o.k, o.rounds, o.dummy, parse_mode(o.mode)};
    const auto key = keygen(p, *entropy);
    write_text(o.out_path, serialize_key(key), o.force);
    out << "wrote key to " << o.out_path << '\n';
    return kOk;
}

int cmd_encrypt(const Options& o, std::ostream&) {
    const auto key = load_key(o.key_path);
    auto entropy = make_entropy(o.entropy);
    const auto plaintext = read_file(o.in_path);
    write_file(o.out_path, seal(key, plaintext, *entropy), o.force);
    return kOk;
}

int cmd_decrypt(const Options& o, std::ostream&) {
    const auto key = load_key(o.key_path);
    const auto container = read_file(o.in_path);
    write_file(o.out_path, open(key, container), o.force);
    return kOk;
}

int cmd_analyze(const Options& o, std::ostream& out) {
    using namespace analysis;
    if (o.kind == "table") {
        out << format_combiner_table(combiner_table());
        return kOk;
    }
    const auto bytes = read_file(o.in_path);
    const Thresholds th;
    std::ostringstream csv;
    out << std::fixed << std::setprecision(6);
    if (o.kind == "entropy") {
        const auto words = pack_words(bytes, o.m);
        const auto profile = entropy_profile(words, o.slots);
        write_profile_csv(csv, profile);
        out << "entropy: words=" << words.size() << " slots=" << o.slots << " total_bits=" << profile.total_bits
            << " r_squared=" << profile.r_squared << " threshold>=" << th.min_r_squared << ' '
            << (profile.r_squared >= th.min_r_squared ? "PASS" : "FAIL") << '\n';
    } else if (o.kind == "flatness") {
        const auto f = byte_flatness(bytes);
        csv << "byte,count\n";
        for (std::size_t b = 0; b < 256; ++b) csv << b << ',' << f.counts[b] << '\n';
        out << "flatness: bytes=" << bytes.size() << " max_deviation=" << f.max_deviation << " ratio=";
        if (f.missing_values) {
            out << "inf(missing byte values)";
        } else {
            out << f.ratio;
        }
        out << " chi_square=" << f.chi_square << " (informational) threshold<=" << th.max_byte_deviation << ' '
            << (f.max_deviation <= th.max_byte_deviation ? "PASS" : "FAIL") << '\n';
    } else if (o.kind == "complexity") {
        const auto h = huffman_complexity(bytes);
        out << "complexity: bytes=" << bytes.size() << " coded_bytes=" << h.coded_bytes << " table_bytes=" << h.table_bytes
            << " huffman_ratio=" << h.ratio << " threshold<=" << th.max_huffman_ratio << ' '
            << (h.ratio <= th.max_huffman_ratio ? "PASS" : "FAIL") << '\n';
    } else if (o.kind == "phase") {
        const auto words = pack_words(bytes, o.m);
        const double occ = phase_occupancy(words, o.grid);
        csv << "x,y\n";
        for (std::size_t i = 0; i + 1 < words.size(); ++i) csv << words[i].raw() << ',' << words[i + 1].raw() << '\n';
        out << "phase: words=" << words.size() << " grid=" << o.grid << " occupancy=" << occ
            << " threshold>=" << th.min_occupancy << ' ' << (occ >= th.min_occupancy ? "PASS" : "FAIL") << '\n';
    } else {
        const auto report = analyze(bytes, o.m, o.slots, o.grid, th);
        write_profile_csv(csv, report.entropy);
        write_verdicts(out, report, th);
    }
    if (!o.csv_path.empty()) write_text(o.csv_path, csv.str(), o.force);
    return kOk;
}

int cmd_attack(const Options& o, std::ostream& out) {
    using namespace attacks;
    out << std::setprecision(6);
    if (o.kind == "avalanche") {
        const auto key = load_key(o.key_path);
        auto entropy = make_entropy(o.entropy);
        std::vector<std::uint8_t> plaintext(o.bytes);
        entropy->fill(plaintext);
        const auto words = pack_words(plaintext, key.m);
        const auto summary = avalanche(key, words, o.trials, *entropy);
        std::ostringstream csv;
        csv << "word_index,mean_fraction\n" << std::setprecision(10);
        for (std::size_t i = 0; i < summary.mean_curve.size(); ++i) csv << i << ',' << summary.mean_curve[i] << '\n';
        if (o.csv_path.empty()) {
            out << csv.str();
        } else {
            write_text(o.csv_path, csv.str(), o.force);
        }
        out << "avalanche: trials=" << o.trials << " words=" << words.size() << " mean_beyond_" << kDivergenceSkip << '='
            << summary.mean << '\n';
        return kOk;
    }

    const auto known = frame_plaintext(read_file(o.known_path), o.m);
    const auto body = container_body(read_file(o.cipher_path), o.m, o.dummy);
    const std::size_t n = std::min(known.size(), body.size());

    if (o.kind == "scan") {
        const auto scan = zero_pn_scan(std::span(known).first(n), std::span(body).first(n));
        std::ostringstream csv;
        csv << "position\n";
        for (auto p : scan.positions) csv << p << '\n';
        if (o.csv_path.empty()) {
            out << csv.str();
        } else {
            write_text(o.csv_path, csv.str(), o.force);
        }
        out << "scan: words=" << n << " zero_p_positions=" << scan.positions.size() << " rate=" << scan.rate
            << " expected_rate=" << scan.expected_rate << '\n';
        return kOk;
    }

    // brute
    if (o.offset + o.window > n) throw UsageError("known window runs past the available words");
    const auto mode = parse_mode(o.mode);
    if (mode == XprimeMode::derived && o.offset != 0) throw UsageError("derived mode searches from the stream start only");
    const auto space = SearchSpace::chaotic_band(o.m, o.k, mode);
    BruteForceOptions opts;
    opts.max_space = u128{1} << o.max_space_log2;
    opts.threads = o.threads;
    out << "search space: 2^" << space.log2_size() << " = " << to_string(space.size()) << " states ("
        << (mode == XprimeMode::derived ? "derived" : "independent") << " x' mode)\n";
    out << "full key space 2^(2m+k): 2^" << full_keyspace_log2(o.m, o.k, 1) << "; derived-x' key space |lambda|*2^m: "
        << to_string(SearchSpace::chaotic_band(o.m, o.k, XprimeMode::derived).size()) << '\n';
    const auto result = brute_force(std::span(known).subspan(o.offset, o.window),
                                    std::span(body).subspan(o.offset, o.window), space, opts);
    out << "attempts: " << to_string(result.attempts) << "\ncandidates: " << result.candidates.size()
        << "\nelapsed_seconds: " << result.elapsed_seconds << '\n';
    std::ostringstream csv;
    csv << "lambda_raw,x,xprime\n" << std::hex;
    for (const auto& c : result.candidates) csv << c.lambda_raw << ',' << c.x << ',' << c.xprime << '\n';
    if (o.csv_path.empty()) {
        out << csv.str();
    } else {
        write_text(o.csv_path, csv.str(), o.force);
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"chaoscipher: chaos-mixing stream cipher and cryptanalysis toolkit", "chaoscipher"};
    app.require_subcommand(1);
    Options o;
    const auto width = CLI::Range(4u, 32u);

    auto* keygen_cmd = app.add_subcommand("keygen", "generate a key file");
    keygen_cmd->add_option("--m", o.m, "word width in bits")->check(width);
    keygen_cmd->add_option("--k", o.k, "lambda width in bits")->check(width);
    keygen_cmd->add_option("--rounds", o.rounds, "number of encryption rounds")->check(CLI::Range(1u, 0xFFFFu));
    keygen_cmd->add_option("--dummy", o.dummy, "dummy region length in words")->check(CLI::Range(1u, 0xFFFFFFFFu));
    keygen_cmd->add_option("--mode", o.mode, "x' mode")->check(CLI::IsMember({"derived", "independent"}));
    keygen_cmd->add_option("--entropy", o.entropy, "system | fixed:HEX | seed:N");
    keygen_cmd->add_option("-o,--out", o.out_path, "output key file")->required();
    keygen_cmd->add_flag("--force", o.force, "overwrite existing output");

    auto* encrypt_cmd = app.add_subcommand("encrypt", "seal a file into a container");
    auto* decrypt_cmd = app.add_subcommand("decrypt", "open a container");
    for (auto* c : {encrypt_cmd, decrypt_cmd}) {
        c->add_option("--key", o.key_path, "key file")->required();
        c->add_option("-i,--in", o.in_path, "input file")->required();
        c->add_option("-o,--out", o.out_path, "output file")->required();
        c->add_flag("--force", o.force, "overwrite existing output");
    }
    encrypt_cmd->add_option("--entropy", o.entropy, "system | fixed:HEX | seed:N");

    auto* analyze_cmd = app.add_subcommand("analyze", "measure a file");
    analyze_cmd->add_option("kind", o.kind, "entropy | flatness | complexity | phase | table | all")
        ->required()
        ->check(CLI::IsMember({"entropy", "flatness", "complexity", "phase", "table", "all"}));
    analyze_cmd->add_option("-i,--in", o.in_path, "input file");
    analyze_cmd->add_option("--m", o.m, "word width used to read the file")->check(width);
    analyze_cmd->add_option("--slots", o.slots, "entropy slot count")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 26));
    analyze_cmd->add_option("--grid", o.grid, "phase grid size")->check(CLI::Range(std::size_t{2}, std::size_t{4096}));
    analyze_cmd->add_option("--csv", o.csv_path, "write plot data as CSV");
    analyze_cmd->add_flag("--force", o.force, "overwrite existing CSV");

    auto* attack_cmd = app.add_subcommand("attack", "run an attack experiment");
    attack_cmd->add_option("kind", o.kind, "brute | scan | avalanche")
        ->required()
        ->check(CLI::IsMember({"brute", "scan", "avalanche"}));
    attack_cmd->add_option("--m", o.m, "assumed word width")->check(width);
    attack_cmd->add_option("--k", o.k, "assumed lambda width")->check(width);
    attack_cmd->add_option("--dummy", o.dummy, "assumed dummy region length")->check(CLI::Range(0u, 0xFFFFFFFFu));
    attack_cmd->add_option("--mode", o.mode, "x' mode")->check(CLI::IsMember({"derived", "independent"}));
    attack_cmd->add_option("--known", o.known_path, "known plaintext file");
    attack_cmd->add_option("--cipher", o.cipher_path, "observed container");
    attack_cmd->add_option("--window", o.window, "known window length in words")->check(CLI::Range(std::size_t{4}, std::size_t{1} << 20));
    attack_cmd->add_option("--offset", o.offset, "window start (word index in the body)");
    attack_cmd->add_option("--max-space", o.max_space_log2, "log2 of the largest space to search")->check(CLI::Range(1u, 100u));
    attack_cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    attack_cmd->add_option("--key", o.key_path, "key file (avalanche)");
    attack_cmd->add_option("--bytes", o.bytes, "plaintext bytes (avalanche)")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30));
    attack_cmd->add_option("--trials", o.trials, "trials (avalanche)")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
    attack_cmd->add_option("--entropy", o.entropy, "system | fixed:HEX | seed:N (avalanche)");
    attack_cmd->add_option("--csv", o.csv_path, "write results as CSV");
    attack_cmd->add_flag("--force", o.force, "overwrite existing CSV");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (keygen_cmd->parsed()) return cmd_keygen(o, out);
        if (encrypt_cmd->parsed()) return cmd_encrypt(o, out);
        if (decrypt_cmd->parsed()) return cmd_decrypt(o, out);
        if (analyze_cmd->parsed()) {
            if (o.kind != "table" && o.in_path.empty()) throw UsageError("--in is required");
            return cmd_analyze(o, out);
        }
        if (attack_cmd->parsed()) {
            if (o.kind == "avalanche" && o.key_path.empty()) throw UsageError("--key is required");
            if (o.kind != "avalanche" && (o.known_path.empty() || o.cipher_path.empty())) {
                throw UsageError("--known and --cipher are required");
            }
            return cmd_attack(o, out);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const InvalidArgument& e) {
        err << "invalid argument: " << e.what() << '\n';
        return kUsage;
    } catch (const RefusedOverwrite& e) {
        err << "refused: " << e.what() << '\n';
        return kRefusedOverwrite;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const KeyParseError& e) {
        err << "key error: " << e.what() << '\n';
        return kKeyParse;
    } catch (const ContainerError& e) {
        err << "container error: " << e.what() << '\n';
        return e.kind() == ContainerError::Kind::sentinel_mismatch ? kSentinelMismatch : kContainerFormat;
    } catch (const SpaceTooLarge& e) {
        err << "refused: " << e.what() << "; raise --max-space to proceed\n";
        return kSpaceTooLarge;
    } catch (const InsufficientEntropy& e) {
        err << "entropy error: " << e.what() << '\n';
        return kInsufficientEntropy;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}

}  // namespace chaoscipher::cli
