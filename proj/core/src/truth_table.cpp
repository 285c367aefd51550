#include "dtspan/truth_table.hpp"

#include <algorithm>
#include <unordered_map>

namespace dtspan {

namespace {

std::size_t word_count(int n) {
    return n >= 6 ? (std::size_t{1} << (n - 6)) : 1;
}

std::uint64_t low_mask(int n) {
    return n >= 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (1u << n)) - 1;
}

// Bit patterns of x_j = 1 positions within a 64-bit word, for j < 6.
constexpr std::uint64_t kVarMask[6] = {
    0xaaaaaaaaaaaaaaaaULL, 0xccccccccccccccccULL, 0xf0f0f0f0f0f0f0f0ULL,
    0xff00ff00ff00ff00ULL, 0xffff0000ffff0000ULL, 0xffffffff00000000ULL,
};

}  // namespace

TruthTable::TruthTable(int n, std::vector<std::uint64_t> words)
    : n_(n), words_(std::move(words)) {
    if (n_ < 0 || n_ > kMaxEnumerationVars) {
        throw validation_error("truth table arity out of range");
    }
    if (words_.size() != word_count(n_)) {
        throw validation_error("truth table has wrong word count");
    }
    words_.back() &= low_mask(std::min(n_, 6));
}

TruthTable TruthTable::constant(int n, int bit) {
    std::vector<std::uint64_t> w(word_count(n), bit ? ~std::uint64_t{0} : 0);
    return TruthTable(n, std::move(w));
}

void TruthTable::set(std::uint32_t x, int bit) {
    const std::uint64_t m = std::uint64_t{1} << (x & 63);
    if (bit)
        words_[x >> 6] |= m;
    else
        words_[x >> 6] &= ~m;
}

TruthTable TruthTable::from_hex(int n, const std::string& hex) {
    if (n < 1 || n > kMaxEnumerationVars) throw validation_error("n out of range");
    TruthTable t = constant(n, 0);
    // Hex digits give the table as one integer, most significant digit first;
    // bit i of that integer is f at the input whose j'th variable is bit j
    // of i.
    std::uint32_t bit_pos = 0;
    for (auto it = hex.rbegin(); it != hex.rend(); ++it) {
        const char c = *it;
        int v;
        if (c >= '0' && c <= '9')
            v = c - '0';
        else if (c >= 'a' && c <= 'f')
            v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            v = c - 'A' + 10;
        else
            throw validation_error(std::string("invalid hex digit '") + c + "'");
        if (bit_pos >= (1u << n)) {
            if (v != 0) throw validation_error("hex table longer than 2^n bits");
            continue;
        }
        const std::uint32_t remaining = (1u << n) - bit_pos;
        if (remaining < 4 && (v >> remaining) != 0) {
            throw validation_error("hex table longer than 2^n bits");
        }
        t.words_[bit_pos >> 6] |= std::uint64_t(v) << (bit_pos & 63);
        bit_pos += 4;
    }
    return t;
}

std::string TruthTable::to_hex() const {
    const std::uint32_t bits = 1u << n_;
    std::string out;
    const std::uint32_t digits = (bits + 3) / 4;
    for (std::uint32_t d = 0; d < digits; ++d) {
        const std::uint32_t pos = d * 4;
        const int v = static_cast<int>((words_[pos >> 6] >> (pos & 63)) & 0xf);
        out.push_back("0123456789abcdef"[v]);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

bool TruthTable::is_constant() const {
    const std::uint64_t first = words_[0] & 1u ? ~std::uint64_t{0} : 0;
    const std::uint64_t mask = n_ < 6 ? low_mask(n_) : ~std::uint64_t{0};
    if ((words_[0] ^ first) & mask) return false;
    for (std::size_t i = 1; i < words_.size(); ++i) {
        if (words_[i] != first) return false;
    }
    return true;
}

TruthTable TruthTable::cofactor(int var, int bit) const {
    if (var < 0 || var >= n_) throw validation_error("cofactor variable out of range");
    const int m = n_ - 1;
    TruthTable out = constant(m, 0);
    if (var < 6) {
        const int span = 1 << var;
        const std::uint64_t keep = bit ? kVarMask[var] : ~kVarMask[var];
        std::uint32_t out_pos = 0;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t word = words_[w] & keep;
            if (bit) word >>= span;
            // Compress pairs of span-sized blocks down to half a word.
            for (int off = 0; off < 64; off += 2 * span) {
                const std::uint64_t block = (word >> off) & (span >= 64 ? ~0ULL : ((1ULL << span) - 1));
                out.words_[out_pos >> 6] |= block << (out_pos & 63);
                out_pos += span;
                if (n_ <= 6 && out_pos >= (1u << m)) break;
            }
            if (n_ <= 6) break;
        }
    } else {
        // Whole words: keep words whose index has bit (var-6) equal to bit.
        std::size_t out_w = 0;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            if (((w >> (var - 6)) & 1u) == static_cast<std::size_t>(bit)) {
                out.words_[out_w++] = words_[w];
            }
        }
    }
    return TruthTable(m, std::move(out.words_));
}

namespace {

struct TTKey {
    int n;
    std::vector<std::uint64_t> words;
    bool operator==(const TTKey&) const = default;
};

struct TTKeyHash {
    std::size_t operator()(const TTKey& k) const {
        std::uint64_t h = 1469598103934665603ULL ^ static_cast<std::uint64_t>(k.n);
        for (std::uint64_t w : k.words) {
            h ^= w;
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

using Memo = std::unordered_map<TTKey, int, TTKeyHash>;

void check_dp_cap(const TruthTable& f, const char* what) {
    if (f.num_vars() > 12) {
        throw cap_exceeded_error(std::string(what) + ": n = " + std::to_string(f.num_vars()) +
                                 " exceeds cap 12");
    }
}

int func_rank_rec(const TruthTable& f, Memo& memo) {
    if (f.is_constant()) return 0;
    TTKey key{f.num_vars(), f.words()};
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    int best = f.num_vars() + 1;
    for (int i = 0; i < f.num_vars(); ++i) {
        const int r0 = func_rank_rec(f.cofactor(i, 0), memo);
        const int r1 = func_rank_rec(f.cofactor(i, 1), memo);
        best = std::min(best, r0 == r1 ? r0 + 1 : std::max(r0, r1));
    }
    memo.emplace(std::move(key), best);
    return best;
}

int game_value_rec(const TruthTable& f, Memo& memo) {
    if (f.is_constant()) return 0;
    TTKey key{f.num_vars(), f.words()};
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    int best = f.num_vars() + 1;
    for (int i = 0; i < f.num_vars(); ++i) {
        const int v0 = game_value_rec(f.cofactor(i, 0), memo);
        const int v1 = game_value_rec(f.cofactor(i, 1), memo);
        // Responder picks the best of: answer 0, answer 1, or defer (a point,
        // then the querier picks the bit).
        const int reply = std::max({v0, v1, 1 + std::min(v0, v1)});
        best = std::min(best, reply);
    }
    memo.emplace(std::move(key), best);
    return best;
}

}  // namespace

int func_rank(const TruthTable& f) {
    check_dp_cap(f, "func_rank");
    Memo memo;
    return func_rank_rec(f, memo);
}

int game_value(const TruthTable& f) {
    check_dp_cap(f, "game_value");
    Memo memo;
    return game_value_rec(f, memo);
}

}  // namespace dtspan
