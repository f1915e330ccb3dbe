#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace triage {

using TokenList = std::vector<std::string>;

/// Lowercases and splits on every non-ASCII-alphanumeric byte.
TokenList tokenize(std::string_view text);

/// True if `token` (already lowercased) is in the bundled English stop list.
bool is_stop_word(std::string_view token);

/// Number of entries in the bundled stop list.
std::size_t stop_word_count();

/// Classic Porter stemmer (the published 1980 rule set). Input must be a
/// lowercase ASCII word; anything shorter than three characters is returned
/// unchanged.
std::string porter_stem(std::string_view word);

/// tokenize -> drop stop words -> Porter stem. Order preserved; total.
TokenList preprocess(std::string_view text);

}  // namespace triage
