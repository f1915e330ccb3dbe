#include "triage/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace triage {
namespace {

// Bundled English stop list, sorted for binary search.
constexpr std::array<std::string_view, 181> kStopWords{
    "a", "about", "above", "after", "again", "against",
    "ain", "all", "also", "am", "an", "and",
    "any", "are", "aren", "as", "at", "be",
    "because", "been", "before", "being", "below", "between",
    "both", "but", "by", "can", "could", "couldn",
    "d", "did", "didn", "do", "does", "doesn",
    "doing", "don", "down", "during", "each", "either",
    "else", "etc", "ever", "every", "few", "for",
    "from", "further", "had", "hadn", "has", "hasn",
    "have", "haven", "having", "he", "her", "here",
    "hers", "herself", "him", "himself", "his", "how",
    "however", "i", "if", "in", "into", "is",
    "isn", "it", "its", "itself", "just", "ll",
    "m", "ma", "may", "me", "might", "mightn",
    "more", "most", "must", "mustn", "my", "myself",
    "needn", "neither", "no", "nor", "not", "now",
    "o", "of", "off", "on", "once", "only",
    "or", "other", "ought", "our", "ours", "ourself",
    "ourselves", "out", "over", "own", "re", "s",
    "same", "shall", "shan", "she", "should", "shouldn",
    "so", "some", "such", "t", "than", "that",
    "the", "their", "theirs", "them", "themselves", "then",
    "there", "these", "they", "this", "those", "though",
    "through", "thus", "to", "too", "under", "until",
    "up", "upon", "us", "ve", "very", "via",
    "was", "wasn", "we", "were", "weren", "what",
    "whatever", "when", "where", "whereas", "whether", "which",
    "while", "who", "whom", "whose", "why", "will",
    "with", "within", "without", "won", "would", "wouldn",
    "y", "yet", "you", "your", "yours", "yourself",
    "yourselves"};

static_assert(std::is_sorted(kStopWords.begin(), kStopWords.end()));

}  // namespace

TokenList tokenize(std::string_view text) {
  TokenList out;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80 && std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

bool is_stop_word(std::string_view token) {
  return std::binary_search(kStopWords.begin(), kStopWords.end(), token);
}

std::size_t stop_word_count() { return kStopWords.size(); }

TokenList preprocess(std::string_view text) {
  TokenList out;
  for (auto& tok : tokenize(text)) {
    if (is_stop_word(tok)) continue;
    out.push_back(porter_stem(tok));
  }
  return out;
}

}  // namespace triage
