#include <gtest/gtest.h>

#include <string>
#include <utility>
#include <vector>

#include "triage/text.hpp"

using namespace triage;

namespace {

// Reference stems from an independent Porter implementation (classic rule
// set). Regenerate with NLTK: PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM).
const std::vector<std::pair<std::string, std::string>> kReferenceStems = {
    {"activate", "activ"},
    {"adjustable", "adjust"},
    {"adjustment", "adjust"},
    {"adoption", "adopt"},
    {"agreed", "agre"},
    {"airliner", "airlin"},
    {"allowance", "allow"},
    {"analogousli", "analog"},
    {"angulariti", "angular"},
    {"argmin", "argmin"},
    {"attempt", "attempt"},
    {"author", "author"},
    {"authors", "author"},
    {"avoids", "avoid"},
    {"backoff", "backoff"},
    {"bagging", "bag"},
    {"based", "base"},
    {"baselines", "baselin"},
    {"best", "best"},
    {"bhattacharya", "bhattacharya"},
    {"bled", "bled"},
    {"bowdlerize", "bowdler"},
    {"break", "break"},
    {"build", "build"},
    {"callousness", "callous"},
    {"calls", "call"},
    {"caps", "cap"},
    {"caress", "caress"},
    {"caresses", "caress"},
    {"case", "case"},
    {"cats", "cat"},
    {"cease", "ceas"},
    {"centering", "center"},
    {"client", "client"},
    {"coherent", "coher"},
    {"communism", "commun"},
    {"comparable", "compar"},
    {"conditional", "condit"},
    {"configured", "configur"},
    {"conflated", "conflat"},
    {"conformabli", "conform"},
    {"constant", "constant"},
    {"controll", "control"},
    {"deciding", "decid"},
    {"decision", "decis"},
    {"decisiveness", "decis"},
    {"defensible", "defens"},
    {"dependence", "depend"},
    {"dependent", "depend"},
    {"differentli", "differ"},
    {"digitizer", "digit"},
    {"directory", "directori"},
    {"document", "document"},
    {"downstream", "downstream"},
    {"duplicate", "duplic"},
    {"effective", "effect"},
    {"electrical", "electr"},
    {"electriciti", "electr"},
    {"enum", "enum"},
    {"equal", "equal"},
    {"evalkit", "evalkit"},
    {"failing", "fail"},
    {"falling", "fall"},
    {"feed", "feed"},
    {"feudalism", "feudal"},
    {"filing", "file"},
    {"fixture", "fixtur"},
    {"fizzed", "fizz"},
    {"formaliti", "formal"},
    {"formalize", "formal"},
    {"formative", "form"},
    {"formula", "formula"},
    {"further", "further"},
    {"generalizations", "gener"},
    {"given", "given"},
    {"goodness", "good"},
    {"gyroscopic", "gyroscop"},
    {"happy", "happi"},
    {"harvesting", "harvest"},
    {"hesitanci", "hesit"},
    {"hissing", "hiss"},
    {"homologou", "homolog"},
    {"homologous", "homolog"},
    {"hopeful", "hope"},
    {"hopefulness", "hope"},
    {"hopping", "hop"},
    {"inference", "infer"},
    {"information", "inform"},
    {"insensitive", "insensit"},
    {"internally", "intern"},
    {"irritant", "irrit"},
    {"lacking", "lack"},
    {"largest", "largest"},
    {"load", "load"},
    {"localize", "local"},
    {"lupin", "lupin"},
    {"maintainers", "maintain"},
    {"map", "map"},
    {"might", "might"},
    {"monotonicity", "monoton"},
    {"motoring", "motor"},
    {"open", "open"},
    {"operator", "oper"},
    {"oscillators", "oscil"},
    {"overlap", "overlap"},
    {"plastered", "plaster"},
    {"point", "point"},
    {"ponies", "poni"},
    {"possible", "possibl"},
    {"precomputed", "precomput"},
    {"predication", "predic"},
    {"preserves", "preserv"},
    {"probate", "probat"},
    {"process", "process"},
    {"property", "properti"},
    {"purpose", "purpos"},
    {"question", "question"},
    {"radicalli", "radic"},
    {"randomization", "random"},
    {"ranks", "rank"},
    {"rate", "rate"},
    {"rational", "ration"},
    {"real", "real"},
    {"recall", "recal"},
    {"recommending", "recommend"},
    {"reconstruction", "reconstruct"},
    {"reference", "refer"},
    {"relational", "relat"},
    {"replacement", "replac"},
    {"return", "return"},
    {"revival", "reviv"},
    {"roll", "roll"},
    {"runeson", "runeson"},
    {"salton", "salton"},
    {"score", "score"},
    {"self", "self"},
    {"sensibiliti", "sensibl"},
    {"sensitiviti", "sensit"},
    {"sing", "sing"},
    {"sized", "size"},
    {"sky", "sky"},
    {"solved", "solv"},
    {"soon", "soon"},
    {"stopword", "stopword"},
    {"summary", "summari"},
    {"tanned", "tan"},
    {"ties", "ti"},
    {"triplicate", "triplic"},
    {"troubled", "troubl"},
    {"usa", "usa"},
    {"using", "us"},
    {"valenci", "valenc"},
    {"vietnamization", "vietnam"},
    {"vileli", "vile"},
    {"vocabulary", "vocabulari"},
    {"workers", "worker"},
    {"ysong", "ysong"},};

}  // namespace

TEST(Porter, MatchesReferenceStems) {
  for (const auto& [word, stem] : kReferenceStems) EXPECT_EQ(porter_stem(word), stem) << word;
}

TEST(Porter, ShortWordsUnchanged) {
  EXPECT_EQ(porter_stem("a"), "a");
  EXPECT_EQ(porter_stem("is"), "is");
  EXPECT_EQ(porter_stem("as"), "as");
}

TEST(Porter, RestemmingNeverGrows) {
  for (const auto& [word, stem] : kReferenceStems) {
    const auto once = porter_stem(word);
    // A second pass may shorten further; it must never grow the word.
    EXPECT_LE(porter_stem(once).size(), once.size()) << word;
  }
}

TEST(Tokenize, SplitsOnNonAlphanumerics) {
  EXPECT_EQ(tokenize("Hello, World! foo_bar 42x"), (TokenList{"hello", "world", "foo", "bar", "42x"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize("  ...  ").empty());
}

TEST(Tokenize, NonAsciiBytesAreSeparators) {
  EXPECT_EQ(tokenize("caf\xc3\xa9 ok"), (TokenList{"caf", "ok"}));
}

TEST(StopWords, ListIsLoaded) {
  EXPECT_EQ(stop_word_count(), 181u);
  EXPECT_TRUE(is_stop_word("the"));
  EXPECT_TRUE(is_stop_word("when"));
  EXPECT_FALSE(is_stop_word("crash"));
}

TEST(Preprocess, ReferenceSentences) {
  EXPECT_TRUE(preprocess("").empty());
  EXPECT_EQ(preprocess("Crashes when saving file"), (TokenList{"crash", "save", "file"}));
  EXPECT_EQ(preprocess("HTTP 404!!!"), (TokenList{"http", "404"}));
  EXPECT_EQ(preprocess("The editor doesn't render Markdown tables; scrolling freezes."),
            (TokenList{"editor", "render", "markdown", "tabl", "scroll", "freez"}));
  EXPECT_EQ(preprocess("Fixes #12: NullPointerException in SyncService"),
            (TokenList{"fix", "12", "nullpointerexcept", "syncservic"}));
}

TEST(Preprocess, OutputHasNoStopWordsAndIsLowercase) {
  const auto toks = preprocess("It IS the Best of THE times, and it was THE worst");
  for (const auto& t : toks) {
    EXPECT_FALSE(is_stop_word(t)) << t;
    for (char c : t) EXPECT_FALSE(c >= 'A' && c <= 'Z') << t;
  }
}
