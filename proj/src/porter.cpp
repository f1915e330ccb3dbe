// Classic Porter stemmer. Rules follow the published algorithm; the only
// departure is that words of length <= 2 are returned untouched (as in the
// reference C implementation).

#include "triage/text.hpp"

#include <array>
#include <utility>

namespace triage {
namespace {

class Stemmer {
 public:
  explicit Stemmer(std::string_view word) : w_(word) {}

  std::string run() && {
    if (w_.size() <= 2) return std::move(w_);
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5a();
    step5b();
    return std::move(w_);
  }

 private:
  // Consonant test at position i of the current word.
  bool cons(std::size_t i) const {
    switch (w_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // m() for the prefix w_[0, len): number of VC sequences.
  int measure(std::size_t len) const {
    int m = 0;
    std::size_t i = 0;
    while (i < len && cons(i)) ++i;
    while (i < len) {
      while (i < len && !cons(i)) ++i;
      if (i >= len) break;
      while (i < len && cons(i)) ++i;
      ++m;
    }
    return m;
  }

  bool has_vowel(std::size_t len) const {
    for (std::size_t i = 0; i < len; ++i)
      if (!cons(i)) return true;
    return false;
  }

  bool double_cons(std::size_t len) const {
    return len >= 2 && w_[len - 1] == w_[len - 2] && cons(len - 1);
  }

  // *o: prefix ends consonant-vowel-consonant, last consonant not w, x, y.
  bool cvc(std::size_t len) const {
    if (len < 3) return false;
    if (!cons(len - 1) || cons(len - 2) || !cons(len - 3)) return false;
    const char c = w_[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends(std::string_view s) const {
    return w_.size() >= s.size() &&
           std::string_view(w_).substr(w_.size() - s.size()) == s;
  }

  std::size_t stem_len(std::string_view suffix) const {
    return w_.size() - suffix.size();
  }

  void replace_suffix(std::string_view suffix, std::string_view with) {
    w_.resize(stem_len(suffix));
    w_.append(with);
  }

  struct Rule {
    std::string_view suffix;
    std::string_view replacement;
  };

  // First rule whose suffix matches is the only one considered.
  template <std::size_t N>
  void apply_first(const std::array<Rule, N>& rules, int min_measure) {
    for (const auto& r : rules) {
      if (ends(r.suffix)) {
        if (measure(stem_len(r.suffix)) > min_measure)
          replace_suffix(r.suffix, r.replacement);
        return;
      }
    }
  }

  void step1a() {
    if (ends("sses")) {
      replace_suffix("sses", "ss");
    } else if (ends("ies")) {
      replace_suffix("ies", "i");
    } else if (ends("ss")) {
      // unchanged
    } else if (ends("s")) {
      replace_suffix("s", "");
    }
  }

  void step1b() {
    if (ends("eed")) {
      if (measure(stem_len("eed")) > 0) replace_suffix("eed", "ee");
      return;
    }
    std::string_view suffix;
    if (ends("ed") && has_vowel(stem_len("ed"))) {
      suffix = "ed";
    } else if (ends("ing") && has_vowel(stem_len("ing"))) {
      suffix = "ing";
    } else {
      return;
    }
    replace_suffix(suffix, "");
    if (ends("at")) {
      w_ += 'e';
    } else if (ends("bl")) {
      w_ += 'e';
    } else if (ends("iz")) {
      w_ += 'e';
    } else if (double_cons(w_.size())) {
      const char c = w_.back();
      if (c != 'l' && c != 's' && c != 'z') w_.pop_back();
    } else if (measure(w_.size()) == 1 && cvc(w_.size())) {
      w_ += 'e';
    }
  }

  void step1c() {
    if (ends("y") && has_vowel(w_.size() - 1)) w_.back() = 'i';
  }

  void step2() {
    static constexpr std::array<Rule, 20> kRules{{
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
        {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
        {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
        {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
        {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
        {"iviti", "ive"},   {"biliti", "ble"},
    }};
    apply_first(kRules, 0);
  }

  void step3() {
    static constexpr std::array<Rule, 7> kRules{{
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    }};
    apply_first(kRules, 0);
  }

  void step4() {
    static constexpr std::array<std::string_view, 19> kSuffixes{
        "al",  "ance", "ence", "er",  "ic",  "able", "ible",
        "ant", "ement", "ment", "ent", "ion", "ou",  "ism",
        "ate", "iti",  "ous",  "ive", "ize"};
    for (auto s : kSuffixes) {
      if (!ends(s)) continue;
      const std::size_t len = stem_len(s);
      bool ok = measure(len) > 1;
      if (s == "ion") ok = ok && len > 0 && (w_[len - 1] == 's' || w_[len - 1] == 't');
      if (ok) w_.resize(len);
      return;
    }
  }

  void step5a() {
    if (!ends("e")) return;
    const std::size_t len = w_.size() - 1;
    const int m = measure(len);
    if (m > 1 || (m == 1 && !cvc(len))) w_.resize(len);
  }

  void step5b() {
    if (measure(w_.size()) > 1 && double_cons(w_.size()) && w_.back() == 'l')
      w_.pop_back();
  }

  std::string w_;
};

}  // namespace

std::string porter_stem(std::string_view word) {
  return Stemmer(word).run();
}

}  // namespace triage
