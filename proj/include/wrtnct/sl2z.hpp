/**
 * @file sl2z.hpp
 * @brief Exact SL(2,Z) matrices and words in the generators S, T, T^-1.
 *
 * S = (0 -1; 1 0), T = (1 1; 0 1). A word evaluates to the left-to-right
 * product of its letters. Decomposition runs a nearest-integer Euclidean
 * reduction on the first column, so the number of S letters is logarithmic in
 * the entries.
 */
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wrtnct {

using BigInt = boost::multiprecision::cpp_int;

struct SL2Matrix {
    BigInt a{1}, b{0}, c{0}, d{1};

    static SL2Matrix identity() { return {}; }

    /// Throws std::invalid_argument unless ad - bc = 1.
    static SL2Matrix make(BigInt a, BigInt b, BigInt c, BigInt d) {
        SL2Matrix g{std::move(a), std::move(b), std::move(c), std::move(d)};
        if (g.det() != 1) {
            throw std::invalid_argument("matrix is not in SL(2,Z): determinant " + g.det().str());
        }
        return g;
    }

    BigInt det() const { return a * d - b * c; }

    /// Largest absolute entry.
    BigInt max_entry() const {
        BigInt m = abs(a);
        for (const BigInt *x : {&b, &c, &d}) {
            if (abs(*x) > m) m = abs(*x);
        }
        return m;
    }

    friend SL2Matrix operator*(const SL2Matrix &x, const SL2Matrix &y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }

    friend bool operator==(const SL2Matrix &, const SL2Matrix &) = default;

    std::string str() const {
        std::ostringstream os;
        os << a << ',' << b << ',' << c << ',' << d;
        return os.str();
    }
};

inline std::ostream &operator<<(std::ostream &os, const SL2Matrix &g) {
    return os << '(' << g.a << ' ' << g.b << "; " << g.c << ' ' << g.d << ')';
}

enum class Letter { S, T, Tinv };

inline const char *letter_name(Letter l) {
    switch (l) {
        case Letter::S: return "S";
        case Letter::T: return "T";
        case Letter::Tinv: return "Tinv";
    }
    return "?";
}

inline SL2Matrix generator_matrix(Letter l) {
    switch (l) {
        case Letter::S: return {0, -1, 1, 0};
        case Letter::T: return {1, 1, 0, 1};
        case Letter::Tinv: return {1, -1, 0, 1};
    }
    return {};
}

struct SL2Word {
    std::vector<Letter> letters;

    std::size_t length() const noexcept { return letters.size(); }
    bool empty() const noexcept { return letters.empty(); }

    /// Space-separated letter names; empty string for the empty word.
    std::string str() const {
        std::string out;
        for (Letter l : letters) {
            if (!out.empty()) out += ' ';
            out += letter_name(l);
        }
        return out;
    }

    friend SL2Word operator+(SL2Word x, const SL2Word &y) {
        x.letters.insert(x.letters.end(), y.letters.begin(), y.letters.end());
        return x;
    }

    friend bool operator==(const SL2Word &, const SL2Word &) = default;
};

/// Parses a space- or comma-separated list of S, T, Tinv (also "T^-1", "t").
inline SL2Word parse_word(std::string_view text) {
    SL2Word w;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == ' ' || text[i] == ',') {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ' && text[j] != ',') ++j;
        const std::string_view tok = text.substr(i, j - i);
        if (tok == "S") w.letters.push_back(Letter::S);
        else if (tok == "T") w.letters.push_back(Letter::T);
        else if (tok == "Tinv" || tok == "T^-1" || tok == "t") w.letters.push_back(Letter::Tinv);
        else throw std::invalid_argument("unknown generator '" + std::string(tok) + "' at position " + std::to_string(i));
        i = j;
    }
    return w;
}

inline SL2Matrix evaluate(const SL2Word &word) {
    SL2Matrix m = SL2Matrix::identity();
    for (Letter l : word.letters) m = m * generator_matrix(l);
    return m;
}

namespace detail {

/// Nearest integer to num/den (den != 0), ties rounded toward -infinity.
inline BigInt round_div(const BigInt &num, const BigInt &den) {
    BigInt n = num, dd = den;
    if (dd < 0) {
        n = -n;
        dd = -dd;
    }
    // floor((2n + d) / 2d)
    BigInt top = 2 * n + dd;
    BigInt bottom = 2 * dd;
    BigInt q = top / bottom;
    if (top % bottom != 0 && top < 0) q -= 1;
    return q;
}

inline void append_shear(SL2Word &w, const BigInt &q, std::size_t cap) {
    const BigInt mag = abs(q);
    if (mag + w.letters.size() > cap) throw std::length_error("decomposition exceeds the word length cap");
    const auto n = mag.convert_to<std::size_t>();
    w.letters.insert(w.letters.end(), n, q > 0 ? Letter::T : Letter::Tinv);
}

}  // namespace detail

/// Words longer than this are refused; shear exponents are spelled out letter by letter.
inline constexpr std::size_t kMaxWordLength = 10'000'000;

/**
 * Writes g as g = (S S)^{[sign]} T^{q_1} S T^{q_2} S ... T^{q_k} S T^{x}.
 * Each step replaces the first column (a, c) by (c, a - q c) with |a - q c| <= |c|/2.
 */
inline SL2Word decompose(const SL2Matrix &g) {
    if (g.det() != 1) {
        throw std::invalid_argument("decompose: determinant is " + g.det().str() + ", expected 1");
    }
    BigInt a = g.a, b = g.b, c = g.c, d = g.d;
    std::vector<BigInt> quotients;
    while (c != 0) {
        BigInt q = detail::round_div(a, c);
        a -= q * c;
        b -= q * d;
        // left-multiply by S: (a b; c d) -> (-c -d; a b)
        BigInt na = -c, nb = -d;
        c = std::move(a);
        d = std::move(b);
        a = std::move(na);
        b = std::move(nb);
        quotients.push_back(std::move(q));
    }
    // remaining matrix is a * T^{a b} with a = d = +-1; each S^{-1} = -S contributes a sign
    const int sign = ((quotients.size() % 2 == 0) ? 1 : -1) * (a > 0 ? 1 : -1);

    SL2Word w;
    if (sign < 0) w.letters = {Letter::S, Letter::S};
    for (const BigInt &q : quotients) {
        detail::append_shear(w, q, kMaxWordLength);
        w.letters.push_back(Letter::S);
    }
    detail::append_shear(w, a * b, kMaxWordLength);
    return w;
}

inline std::size_t word_length(const SL2Matrix &g) { return decompose(g).length(); }

}  // namespace wrtnct
