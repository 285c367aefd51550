#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dtspan/errors.hpp"

namespace dtspan {

// Boolean function on n <= 20 variables as an explicit table. Bit i of the
// table is f(x) for the input x with x_j = bit j of i, so the table for OR on
// 3 bits is 0xFE.
class TruthTable {
public:
    TruthTable(int n, std::vector<std::uint64_t> words);
    static TruthTable from_hex(int n, const std::string& hex);
    static TruthTable constant(int n, int bit);

    int num_vars() const { return n_; }
    int get(std::uint32_t x) const {
        return static_cast<int>((words_[x >> 6] >> (x & 63)) & 1u);
    }
    void set(std::uint32_t x, int bit);

    bool is_constant() const;
    TruthTable cofactor(int var, int bit) const;  // fix x_var = bit, n shrinks by one
    std::string to_hex() const;
    const std::vector<std::uint64_t>& words() const { return words_; }

    friend bool operator==(const TruthTable&, const TruthTable&) = default;

private:
    int n_;
    std::vector<std::uint64_t> words_;
};

// Minimum rank over decision trees computing f, by memoized recursion over
// restrictions. Caps at n = 12.
int func_rank(const TruthTable& f);

// Value of the query game in which the responder may answer a queried bit or
// defer it for a point; equals func_rank on every total function. Caps at 12.
int game_value(const TruthTable& f);

}  // namespace dtspan
