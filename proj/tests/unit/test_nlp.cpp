#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "commentlens/nlp.hpp"

using namespace commentlens::nlp;

namespace {

std::vector<std::string> tags_of(const TaggedText& t) {
    std::vector<std::string> out;
    for (const auto& tok : t.tokens) out.push_back(tok.pos);
    return out;
}

using Strings = std::vector<std::string>;

}  // namespace

TEST_CASE("tokenize separates terminal punctuation and keeps code tokens") {
    CHECK(tokenize("clear the ring buffer.") == Strings{"clear", "the", "ring", "buffer", "."});
    CHECK(tokenize("").empty());
    CHECK(tokenize("   ").empty());
    CHECK(tokenize("call foo.bar() twice") == Strings{"call", "foo.bar()", "twice"});
    CHECK(tokenize("set max_len = 3;") == Strings{"set", "max_len", "=", "3", ";"});
    CHECK(tokenize("(see below).") == Strings{"(", "see", "below", ")", "."});
    CHECK(tokenize("Why? Really!") == Strings{"Why", "?", "Really", "!"});
    CHECK(tokenize("wait... then go") == Strings{"wait", "...", "then", "go"});
    CHECK(tokenize("e.g. this") == Strings{"e.g.", "this"});
    CHECK(tokenize("uses wantsPackagePrefix, then") == Strings{"uses", "wantsPackagePrefix", ",", "then"});
}

TEST_CASE("pos_tag examples") {
    CHECK(tags_of(pos_tag({"clear", "the", "buffer"})) == Strings{"VB", "DT", "NN"});
    CHECK(tags_of(pos_tag({"error", "occurred"})) == Strings{"NN", "VBD"});
    CHECK(tags_of(pos_tag({"TODO"})) == Strings{"NN"});
    CHECK(pos_tag({}).tokens.empty());
}

TEST_CASE("imperative rule and contextual fixes") {
    CHECK(analyze("Returns the number of elements.").tokens[0].pos == "VBZ");
    CHECK(analyze("Set the flag.").tokens[0].pos == "VB");
    CHECK(analyze("Called when ready.").tokens[0].pos == "VBN");
    CHECK(analyze("Do nothing.").tokens[0].pos == "VB");
    auto t = analyze("We need to copy the array.");
    CHECK(t.tokens[3].pos == "VB");  // after "to"
    auto u = analyze("Run the check now.");
    CHECK(u.tokens[2].pos == "NN");  // "check" after a determiner
    CHECK(analyze("Initialize the table.").tokens[0].pos == "VB");
    CHECK(analyze("Unknown tokens: fooing").tokens.back().pos == "VBG");
}

TEST_CASE("tags are total and drawn from the closed set") {
    std::mt19937_64 rng(1);
    const std::vector<std::string> pool = {"the", "Clear", "foo.bar()", "42", ".", ",", "TODO", "quickly",
                                           "(", ")", "x_y", "running", "parsed", "runs", "Zork", "&", "#", "--",
                                           "\"", "=", "über", "naïve", "don't", "0x1F"};
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<std::string> toks(std::uniform_int_distribution<std::size_t>(0, 12)(rng));
        for (auto& tok : toks) tok = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
        auto tagged = pos_tag(toks);
        REQUIRE(tagged.tokens.size() == toks.size());
        for (std::size_t i = 0; i < toks.size(); ++i) {
            CHECK(is_valid_tag(tagged.tokens[i].pos));
            CHECK(tagged.tokens[i].index == i);
            CHECK(tagged.tokens[i].surface == toks[i]);
        }
        CHECK(pos_tag(toks) == tagged);
    }
    CHECK(penn_tags().size() == 36);
}

TEST_CASE("has_symbol rules") {
    CHECK(has_symbol("wantsPackagePrefix"));
    CHECK_FALSE(has_symbol("clear the ring buffer."));
    CHECK_FALSE(has_symbol(""));
    CHECK_FALSE(has_symbol("TODO Auto-generated catch block"));
    CHECK(has_symbol("x = 1"));
    CHECK(has_symbol("see foo.bar"));
    CHECK(has_symbol("max_len"));
    CHECK(has_symbol("a < b"));
    CHECK_FALSE(has_symbol("Done. Next step"));
    for (std::string s : {"wantsPackagePrefix", "plain words", "f(x)", "e.g. this", ""}) {
        CHECK(has_symbol(s) == has_symbol("  \t" + s + " \n"));
    }
}

TEST_CASE("non-English detection") {
    CHECK(is_non_english("\xE8\xBF\x99\xE6\x98\xAF\xE4\xB8\x80\xE4\xB8\xAA\xE6\xB5\x8B\xE8\xAF\x95"));  // Chinese
    CHECK(is_non_english("\xE8\xAE\xBE\xE7\xBD\xAE\xE7\xBC\x93\xE5\x86\xB2\xE5\x8C\xBA buffer"));
    CHECK_FALSE(is_non_english("\xE8\xAE\xBE\xE7\xBD\xAE buffer"));
    CHECK_FALSE(is_non_english("clear the buffer"));
    CHECK_FALSE(is_non_english("na\xC3\xAFve caf\xC3\xA9 approach"));
    CHECK_FALSE(is_non_english(""));
    CHECK_FALSE(is_non_english("\xE2\x80\x94 dash only"));
}

TEST_CASE("lemmatization") {
    CHECK(lemmatize("created", "VBD") == "create");
    CHECK(lemmatize("stopped", "VBD") == "stop");
    CHECK(lemmatize("running", "VBG") == "run");
    CHECK(lemmatize("returns", "VBZ") == "return");
    CHECK(lemmatize("passes", "VBZ") == "pass");
    CHECK(lemmatize("copies", "VBZ") == "copy");
    CHECK(lemmatize("did", "VBD") == "do");
    CHECK(lemmatize("buffers", "NNS") == "buffer");
    CHECK(lemmatize("classes", "NNS") == "class");
    CHECK(lemmatize("entries", "NNS") == "entry");
    CHECK(lemmatize("data", "NNS") == "data");
    CHECK(lemmatize("status", "NN") == "status");
}

TEST_CASE("verb-noun pairs") {
    auto pairs = extract_verb_noun_pairs(analyze("create some test data"));
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].verb == "create");
    CHECK(pairs[0].noun == "data");

    pairs = extract_verb_noun_pairs(analyze("do nothing"));
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].verb == "do");
    CHECK(pairs[0].noun == "nothing");

    CHECK(extract_verb_noun_pairs(analyze("the quick result")).empty());

    pairs = extract_verb_noun_pairs(analyze("Clears the buffers, then returns the results."));
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].verb == "clear");
    CHECK(pairs[0].noun == "buffer");
    CHECK(pairs[1].verb == "return");
    CHECK(pairs[1].noun == "result");

    // A code token ends the search.
    CHECK(extract_verb_noun_pairs(analyze("call foo.bar() twice")).empty());
    for (const char* text : {"Copy the array.", "We need to copy the array because it is modified later.",
                             "If the list is empty, return null."}) {
        for (const auto& p : extract_verb_noun_pairs(analyze(text))) CHECK(p.verb_index < p.noun_index);
    }
}

TEST_CASE("lexicon parsing") {
    auto lex = Lexicon::parse("# comment\nclear\tJJ\nclear\tVB\nthe\tDT\r\n\nbad line\n");
    CHECK(lex.size() == 2);
    CHECK(lex.tag("clear") == "JJ");
    CHECK(lex.has_reading("clear", "VB"));
    CHECK(lex.can_be_verb("clear"));
    CHECK_FALSE(lex.can_be_verb("the"));
    CHECK(lex.tag("missing").empty());
    CHECK(Lexicon::embedded().size() > 5000);
}

TEST_CASE("first-token accuracy on the hand-tagged sample is at least 85%") {
    std::ifstream in(COMMENTLENS_FIXTURES "/nlp/first_token_gold.tsv");
    REQUIRE(in);
    std::string line;
    int total = 0, correct = 0;
    std::ostringstream misses;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        REQUIRE(tab != std::string::npos);
        auto gold = line.substr(0, tab);
        auto tagged = analyze(line.substr(tab + 1));
        REQUIRE_FALSE(tagged.tokens.empty());
        ++total;
        if (tagged.tokens[0].pos == gold) ++correct;
        else misses << "  " << gold << " vs " << tagged.tokens[0].pos << ": " << line.substr(tab + 1) << "\n";
    }
    CHECK(total == 200);
    double acc = static_cast<double>(correct) / total;
    MESSAGE("first-token accuracy " << acc << "\n" << misses.str());
    CHECK(acc >= 0.85);
}
