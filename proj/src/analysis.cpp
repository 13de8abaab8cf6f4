#include "chaoscipher/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>

#include "chaoscipher/framing.hpp"

namespace chaoscipher::analysis {

SlotHistogram SlotHistogram::build(std::span<const FxWord> words, std::size_t slots) {
    if (slots < 2) throw InvalidArgument("slot count must be at least 2");
    SlotHistogram h;
    h.slots = slots;
    h.width = words.empty() ? 16 : words.front().width();
    h.counts.assign(slots, 0);
    for (const auto& w : words) {
        if (w.width() != h.width) throw InvalidArgument("mixed word widths in histogram");
        ++h.counts[slot_of(w.raw(), h.width, slots)];
    }
    h.total = words.size();
    return h;
}

double shannon_entropy(std::span<const std::uint64_t> counts) {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) throw InvalidArgument("entropy of an empty histogram");
    const double n = static_cast<double>(total);
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

double shannon_entropy(const SlotHistogram& hist) {
    if (hist.total == 0) throw InvalidArgument("entropy of an empty histogram");
    return shannon_entropy(hist.counts);
}

double linear_r_squared(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    const double mean_x = (static_cast<double>(n) - 1.0) / 2.0;
    double mean_y = 0.0;
    for (double v : values) mean_y += v;
    mean_y /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - mean_x;
        const double dy = values[i] - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (syy <= 0.0) return 0.0;
    return (sxy * sxy) / (sxx * syy);
}

EntropyProfile entropy_profile(std::span<const FxWord> words, std::size_t slots) {
    if (words.empty()) throw InvalidArgument("entropy profile of an empty sequence");
    const auto hist = SlotHistogram::build(words, slots);
    EntropyProfile profile;
    profile.cumulative.resize(slots);
    const double n = static_cast<double>(hist.total);
    double running = 0.0;
    for (std::size_t j = 0; j < slots; ++j) {
        if (const auto c = hist.counts[j]; c != 0) {
            const double p = static_cast<double>(c) / n;
            running -= p * std::log2(p);
        }
        profile.cumulative[j] = running;
    }
    profile.total_bits = running;
    profile.r_squared = linear_r_squared(profile.cumulative);
    return profile;
}

Flatness byte_flatness(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 256) throw InvalidArgument("flatness needs at least 256 bytes");
    Flatness f;
    for (auto b : bytes) ++f.counts[b];
    const auto [lo, hi] = std::minmax_element(f.counts.begin(), f.counts.end());
    f.min_count = *lo;
    f.max_count = *hi;
    f.missing_values = f.min_count == 0;
    f.ratio = f.missing_values ? std::numeric_limits<double>::infinity()
                               : static_cast<double>(f.max_count) / static_cast<double>(f.min_count);
    const double mean = static_cast<double>(bytes.size()) / 256.0;
    for (auto c : f.counts) {
        const double d = static_cast<double>(c) - mean;
        f.max_deviation = std::max(f.max_deviation, std::abs(d) / mean);
        f.chi_square += d * d / mean;
    }
    return f;
}

HuffmanCode HuffmanCode::from_frequencies(const std::array<std::uint64_t, 256>& freq) {
    struct Node {
        std::uint64_t weight;
        int min_symbol;
        int left, right;  // -1 for leaves
    };
    std::vector<Node> nodes;
    auto heavier = [&nodes](int a, int b) {
        if (nodes[a].weight != nodes[b].weight) return nodes[a].weight > nodes[b].weight;
        return nodes[a].min_symbol > nodes[b].min_symbol;
    };
    std::priority_queue<int, std::vector<int>, decltype(heavier)> queue(heavier);
    for (int s = 0; s < 256; ++s) {
        if (freq[s] == 0) continue;
        nodes.push_back({freq[s], s, -1, -1});
        queue.push(static_cast<int>(nodes.size()) - 1);
    }

    HuffmanCode code;
    if (nodes.size() == 1) {
        code.lengths_[nodes.front().min_symbol] = 1;
        code.assign_canonical();
        return code;
    }
    while (queue.size() > 1) {
        const int a = queue.top();
        queue.pop();
        const int b = queue.top();
        queue.pop();
        nodes.push_back({nodes[a].weight + nodes[b].weight, std::min(nodes[a].min_symbol, nodes[b].min_symbol), a, b});
        queue.push(static_cast<int>(nodes.size()) - 1);
    }
    if (!queue.empty()) {
        std::vector<std::pair<int, unsigned>> stack{{queue.top(), 0u}};
        while (!stack.empty()) {
            auto [idx, depth] = stack.back();
            stack.pop_back();
            const Node& n = nodes[idx];
            if (n.left < 0) {
                if (depth > 64) throw Error("huffman code length exceeds 64 bits");
                code.lengths_[n.min_symbol] = static_cast<std::uint8_t>(depth);
            } else {
                stack.push_back({n.left, depth + 1});
                stack.push_back({n.right, depth + 1});
            }
        }
    }
    code.assign_canonical();
    return code;
}

HuffmanCode HuffmanCode::from_lengths(const std::array<std::uint8_t, 256>& lengths) {
    HuffmanCode code;
    code.lengths_ = lengths;
    code.assign_canonical();
    return code;
}

void HuffmanCode::assign_canonical() {
    std::vector<int> order;
    for (int s = 0; s < 256; ++s) {
        if (lengths_[s] != 0) order.push_back(s);
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return lengths_[a] < lengths_[b]; });
    std::uint64_t next = 0;
    unsigned prev_len = order.empty() ? 0 : lengths_[order.front()];
    codes_.fill(0);
    for (int s : order) {
        next <<= (lengths_[s] - prev_len);
        prev_len = lengths_[s];
        codes_[s] = next++;
    }
}

long double HuffmanCode::kraft_sum() const {
    long double sum = 0.0L;
    for (auto len : lengths_) {
        if (len != 0) sum += std::ldexp(1.0L, -static_cast<int>(len));
    }
    return sum;
}

std::vector<std::uint8_t> HuffmanCode::encode(std::span<const std::uint8_t> bytes, std::uint64_t& bit_count) const {
    std::vector<std::uint8_t> out;
    std::uint8_t cur = 0;
    unsigned filled = 0;
    bit_count = 0;
    for (auto b : bytes) {
        const unsigned len = lengths_[b];
        if (len == 0) throw InvalidArgument("symbol not present in code");
        for (unsigned i = len; i-- > 0;) {
            cur = static_cast<std::uint8_t>(cur << 1 | ((codes_[b] >> i) & 1));
            if (++filled == 8) {
                out.push_back(cur);
                cur = 0;
                filled = 0;
            }
        }
        bit_count += len;
    }
    if (filled != 0) out.push_back(static_cast<std::uint8_t>(cur << (8 - filled)));
    return out;
}

std::vector<std::uint8_t> HuffmanCode::decode(std::span<const std::uint8_t> bits, std::size_t symbol_count) const {
    // Canonical decoding tables: first code and first sorted index per length.
    std::vector<int> sorted;
    for (int s = 0; s < 256; ++s) {
        if (lengths_[s] != 0) sorted.push_back(s);
    }
    std::stable_sort(sorted.begin(), sorted.end(), [&](int a, int b) { return lengths_[a] < lengths_[b]; });
    std::array<std::uint64_t, 66> count{}, first{}, index{};
    for (int s : sorted) ++count[lengths_[s]];
    std::uint64_t code = 0, idx = 0;
    for (unsigned len = 1; len <= 64; ++len) {
        code = (code + count[len - 1]) << 1;
        if (len == 1) code = 0;
        first[len] = code;
        index[len] = idx;
        idx += count[len];
    }

    std::vector<std::uint8_t> out;
    out.reserve(symbol_count);
    std::size_t bitpos = 0;
    const std::size_t total_bits = bits.size() * 8;
    while (out.size() < symbol_count) {
        std::uint64_t acc = 0;
        unsigned len = 0;
        for (;;) {
            if (bitpos >= total_bits || len >= 64) throw Error("huffman bit stream ended inside a code");
            acc = acc << 1 | ((bits[bitpos / 8] >> (7 - bitpos % 8)) & 1);
            ++bitpos;
            ++len;
            if (count[len] != 0 && acc >= first[len] && acc - first[len] < count[len]) {
                out.push_back(static_cast<std::uint8_t>(sorted[index[len] + (acc - first[len])]));
                break;
            }
        }
    }
    return out;
}

HuffmanResult huffman_complexity(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) throw InvalidArgument("huffman ratio of empty input");
    std::array<std::uint64_t, 256> freq{};
    for (auto b : bytes) ++freq[b];
    const auto code = HuffmanCode::from_frequencies(freq);
    std::uint64_t bits = 0;
    const auto encoded = code.encode(bytes, bits);

    HuffmanResult r;
    r.coded_bytes = (bits + 7) / 8;
    r.ratio = static_cast<double>(bytes.size()) / static_cast<double>(r.coded_bytes + r.table_bytes);
    const auto decoded = code.decode(encoded, bytes.size());
    r.round_trip_ok = std::equal(decoded.begin(), decoded.end(), bytes.begin(), bytes.end());
    return r;
}

double phase_occupancy(std::span<const FxWord> words, std::size_t grid) {
    if (words.size() < 2) throw InvalidArgument("phase occupancy needs at least 2 words");
    if (grid < 2) throw InvalidArgument("grid size must be at least 2");
    const unsigned m = words.front().width();
    std::vector<bool> hit(grid * grid, false);
    std::size_t occupied = 0;
    for (std::size_t i = 0; i + 1 < words.size(); ++i) {
        const auto a = SlotHistogram::slot_of(words[i].raw(), m, grid);
        const auto b = SlotHistogram::slot_of(words[i + 1].raw(), m, grid);
        const auto cell = a * grid + b;
        if (!hit[cell]) {
            hit[cell] = true;
            ++occupied;
        }
    }
    return static_cast<double>(occupied) / static_cast<double>(grid * grid);
}

CombinerTable combiner_table() {
    CombinerTable t;
    std::array<int, 6> ones{};
    for (int i = 0; i < 8; ++i) {
        CombinerRow r{};
        r.x = i >> 2 & 1;
        r.xprime = i >> 1 & 1;
        r.y = i & 1;
        r.p = r.x ^ r.xprime;
        r.c = r.p ^ r.y;
        r.y_equals_c = r.y == r.c ? 1 : 0;
        t.rows[static_cast<std::size_t>(i)] = r;
        const std::array<int, 6> cols{r.x, r.xprime, r.p, r.y, r.c, r.y_equals_c};
        for (std::size_t c = 0; c < 6; ++c) ones[c] += cols[c];
    }
    for (std::size_t c = 0; c < 6; ++c) t.balance[c] = 100.0 * ones[c] / 8.0;
    return t;
}

std::string format_combiner_table(const CombinerTable& table) {
    std::ostringstream out;
    out << "x_n\tx'_n\tP_n\ty_n\tC_n\ty_n=C_n\n";
    for (const auto& r : table.rows) {
        out << r.x << '\t' << r.xprime << '\t' << r.p << '\t' << r.y << '\t' << r.c << '\t' << r.y_equals_c << '\n';
    }
    for (std::size_t c = 0; c < 6; ++c) {
        out << std::lround(table.balance[c]) << '%' << (c + 1 < 6 ? '\t' : '\n');
    }
    return out.str();
}

AnalysisReport analyze(std::span<const std::uint8_t> bytes, unsigned m, std::size_t slots, std::size_t grid,
                       const Thresholds& thresholds) {
    const auto words = pack_words(bytes, m);
    AnalysisReport report;
    report.entropy = entropy_profile(words, slots);
    report.flatness = byte_flatness(bytes);
    report.huffman = huffman_complexity(bytes);
    report.grid = grid;
    report.occupancy = phase_occupancy(words, grid);
    report.entropy_pass = report.entropy.r_squared >= thresholds.min_r_squared;
    report.flatness_pass = report.flatness.max_deviation <= thresholds.max_byte_deviation;
    report.complexity_pass = report.huffman.ratio <= thresholds.max_huffman_ratio;
    report.occupancy_pass = report.occupancy >= thresholds.min_occupancy;
    return report;
}

void write_profile_csv(std::ostream& out, const EntropyProfile& profile) {
    out << "slot_index,cumulative_bits\n";
    out << std::setprecision(10);
    for (std::size_t i = 0; i < profile.cumulative.size(); ++i) out << i << ',' << profile.cumulative[i] << '\n';
}

namespace {

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

}  // namespace

void write_verdicts(std::ostream& out, const AnalysisReport& report, const Thresholds& thresholds) {
    out << std::fixed << std::setprecision(6);
    out << "entropy: total_bits=" << report.entropy.total_bits << " r_squared=" << report.entropy.r_squared
        << " threshold>=" << thresholds.min_r_squared << ' ' << verdict(report.entropy_pass) << '\n';
    out << "flatness: max_deviation=" << report.flatness.max_deviation << " ratio=";
    if (report.flatness.missing_values) {
        out << "inf(missing byte values)";
    } else {
        out << report.flatness.ratio;
    }
    out << " chi_square=" << report.flatness.chi_square << " (informational)"
        << " threshold<=" << thresholds.max_byte_deviation << ' ' << verdict(report.flatness_pass) << '\n';
    out << "complexity: huffman_ratio=" << report.huffman.ratio << " threshold<=" << thresholds.max_huffman_ratio << ' '
        << verdict(report.complexity_pass) << '\n';
    out << "phase: occupancy=" << report.occupancy << " grid=" << report.grid << " threshold>=" << thresholds.min_occupancy
        << ' ' << verdict(report.occupancy_pass) << '\n';
}

}  // namespace chaoscipher::analysis
