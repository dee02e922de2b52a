#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "sb/errors.hpp"

namespace sb {

// Eventually periodic symbol sequence over {+1,-1}: a finite head followed by
// an infinitely repeating block.  Text form: head symbols, then the block in
// parentheses with a trailing star, e.g. "+-+(-+)*" or "(-)*".
struct SymbolWord {
    std::vector<std::int8_t> head;
    std::vector<std::int8_t> block;  // never empty

    int at(std::size_t n) const {
        if (n < head.size()) return head[n];
        return block[(n - head.size()) % block.size()];
    }

    std::size_t head_length() const { return head.size(); }
    std::size_t period() const { return block.size(); }

    bool operator==(const SymbolWord&) const = default;
};

inline SymbolWord parse_word(const std::string& text) {
    SymbolWord w;
    std::size_t i = 0;
    auto symbol_of = [](char c) -> int {
        if (c == '+') return +1;
        if (c == '-') return -1;
        return 0;
    };
    while (i < text.size() && text[i] != '(') {
        int s = symbol_of(text[i]);
        if (s == 0)
            throw DomainError("word: unexpected character '" + std::string(1, text[i]) +
                              "' in \"" + text + "\"");
        w.head.push_back(static_cast<std::int8_t>(s));
        ++i;
    }
    if (i == text.size())
        throw DomainError("word: missing periodic block in \"" + text + "\"");
    ++i;  // consume '('
    while (i < text.size() && text[i] != ')') {
        int s = symbol_of(text[i]);
        if (s == 0)
            throw DomainError("word: unexpected character '" + std::string(1, text[i]) +
                              "' in periodic block of \"" + text + "\"");
        w.block.push_back(static_cast<std::int8_t>(s));
        ++i;
    }
    if (i + 1 >= text.size() || text[i] != ')' || text[i + 1] != '*')
        throw DomainError("word: periodic block must end with \")*\" in \"" + text + "\"");
    if (i + 2 != text.size())
        throw DomainError("word: trailing characters after \")*\" in \"" + text + "\"");
    if (w.block.empty())
        throw DomainError("word: empty periodic block in \"" + text + "\"");
    return w;
}

inline std::string format_word(const SymbolWord& w) {
    std::string s;
    for (auto h : w.head) s += (h > 0 ? '+' : '-');
    s += '(';
    for (auto b : w.block) s += (b > 0 ? '+' : '-');
    s += ")*";
    return s;
}

// the word shifted left by one symbol (drops the first letter)
inline SymbolWord shift_word(const SymbolWord& w) {
    SymbolWord s = w;
    if (!s.head.empty())
        s.head.erase(s.head.begin());
    else
        std::rotate(s.block.begin(), s.block.begin() + 1, s.block.end());
    return s;
}

} // namespace sb
