#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace bron {

/// Lowercases ASCII letters and splits on every run of non-alphanumeric
/// bytes. No stemming or stop-word removal.
inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

}  // namespace bron
