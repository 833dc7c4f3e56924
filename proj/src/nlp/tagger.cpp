#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_map>

#include "commentlens/nlp.hpp"

namespace commentlens::nlp {

extern const char* const embedded_lexicon_tsv;

namespace {

constexpr std::array<std::string_view, 36> word_tags = {
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD", "NN",
    "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM",
    "TO", "UH", "VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT", "WP", "WP$", "WRB",
};

constexpr std::array<std::string_view, 9> punct_tags = {".", ",", ":", "(", ")", "``", "''", "#", "$"};

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return is_upper(c) || is_lower(c); }
bool is_word_char(char c) { return is_alpha(c) || is_digit(c) || c == '_'; }

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) {
        if (is_upper(c)) c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool has_camel_hump(std::string_view w) {
    for (std::size_t i = 1; i < w.size(); ++i) {
        if (is_upper(w[i]) && (is_lower(w[i - 1]) || is_digit(w[i - 1]))) return true;
    }
    return false;
}

bool is_code_like(std::string_view w) {
    if (w.find_first_of("._()=") != std::string_view::npos) {
        // A lone punctuation run such as "..." is not code.
        return std::any_of(w.begin(), w.end(), is_word_char);
    }
    return has_camel_hump(w);
}

bool all_punct(std::string_view w) {
    return !w.empty() && std::none_of(w.begin(), w.end(), [](char c) {
        return is_word_char(c) || static_cast<unsigned char>(c) >= 0x80;
    });
}

bool is_number(std::string_view w) {
    if (w.size() > 2 && w[0] == '0' && (w[1] == 'x' || w[1] == 'X')) {
        return std::all_of(w.begin() + 2, w.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; });
    }
    std::size_t i = (w[0] == '-' || w[0] == '+') ? 1 : 0;
    bool digit = false;
    for (; i < w.size(); ++i) {
        if (is_digit(w[i])) digit = true;
        else if (w[i] != '.' && w[i] != ',' && w[i] != '%') return false;
    }
    return digit;
}

std::string punct_tag(std::string_view w) {
    if (w == "." || w == "!" || w == "?" || w == "?!" || w == "!!") return ".";
    if (w == ",") return ",";
    if (w == ";" || w == ":" || w == "..." || w == "-" || w == "--") return ":";
    if (w == "(" || w == "[" || w == "{") return "(";
    if (w == ")" || w == "]" || w == "}") return ")";
    if (w == "\"" || w == "``" || w == "`") return "``";
    if (w == "''" || w == "'") return "''";
    if (w == "#") return "#";
    if (w == "$") return "$";
    if (w == "&") return "CC";
    return "SYM";
}

const std::unordered_map<std::string_view, std::string_view>& irregular_verbs() {
    static const std::unordered_map<std::string_view, std::string_view> table = {
        {"is", "be"}, {"are", "be"}, {"was", "be"}, {"were", "be"}, {"been", "be"}, {"am", "be"},
        {"has", "have"}, {"had", "have"}, {"does", "do"}, {"did", "do"}, {"done", "do"},
        {"made", "make"}, {"got", "get"}, {"gotten", "get"}, {"found", "find"}, {"went", "go"},
        {"gone", "go"}, {"goes", "go"}, {"ran", "run"}, {"sent", "send"}, {"built", "build"},
        {"left", "leave"}, {"kept", "keep"}, {"wrote", "write"}, {"written", "write"},
        {"took", "take"}, {"taken", "take"}, {"gave", "give"}, {"given", "give"},
        {"threw", "throw"}, {"thrown", "throw"}, {"began", "begin"}, {"begun", "begin"},
        {"broke", "break"}, {"broken", "break"}, {"chose", "choose"}, {"chosen", "choose"},
        {"held", "hold"}, {"brought", "bring"}, {"thought", "think"}, {"told", "tell"},
        {"said", "say"}, {"saw", "see"}, {"seen", "see"}, {"came", "come"}, {"became", "become"},
        {"knew", "know"}, {"known", "know"}, {"lost", "lose"}, {"meant", "mean"}, {"paid", "pay"},
        {"caught", "catch"}, {"bought", "buy"}, {"fed", "feed"}, {"led", "lead"}, {"hid", "hide"},
        {"hidden", "hide"}, {"bound", "bind"}, {"dealt", "deal"}, {"spent", "spend"}, {"stood", "stand"},
    };
    return table;
}

}  // namespace

std::span<const std::string_view> penn_tags() noexcept { return word_tags; }

bool is_valid_tag(std::string_view tag) noexcept {
    return std::find(word_tags.begin(), word_tags.end(), tag) != word_tags.end() ||
           std::find(punct_tags.begin(), punct_tags.end(), tag) != punct_tags.end();
}

std::vector<std::string> tokenize(std::string_view text) {
    static constexpr std::string_view terminal = ".,;:!?";
    static constexpr std::string_view openers = "([{\"'`";
    static constexpr std::string_view closers = ")]}\"'`";
    static constexpr std::array<std::string_view, 5> abbreviations = {"e.g.", "i.e.", "etc.", "vs.", "cf."};

    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j == i) break;
        std::string_view w = text.substr(i, j - i);
        i = j;

        if (all_punct(w) || std::find(abbreviations.begin(), abbreviations.end(), ascii_lower(w)) != abbreviations.end()) {
            out.emplace_back(w);
            continue;
        }
        while (w.size() > 1 && openers.find(w.front()) != std::string_view::npos) {
            char closer = closers[openers.find(w.front())];
            if (w.find(closer, 1) != std::string_view::npos) break;
            out.emplace_back(1, w.front());
            w.remove_prefix(1);
        }
        std::vector<std::string> tail;
        while (w.size() > 1) {
            char last = w.back();
            if (terminal.find(last) != std::string_view::npos) {
                std::size_t k = w.size();
                while (k > 1 && terminal.find(w[k - 1]) != std::string_view::npos) --k;
                auto run = w.substr(k);
                if (run == "...") tail.emplace_back(run);
                else for (auto it = run.rbegin(); it != run.rend(); ++it) tail.emplace_back(1, *it);
                w = w.substr(0, k);
                continue;
            }
            auto pos = closers.find(last);
            if (pos != std::string_view::npos && w.find(openers[pos]) == std::string_view::npos) {
                tail.emplace_back(1, last);
                w.remove_suffix(1);
                continue;
            }
            break;
        }
        out.emplace_back(w);
        out.insert(out.end(), tail.rbegin(), tail.rend());
    }
    return out;
}

bool has_symbol(std::string_view text) {
    if (text.find_first_of("(){}[];=<>+*/") != std::string_view::npos) return true;
    for (std::size_t i = 1; i < text.size(); ++i) {
        char c = text[i];
        char p = text[i - 1];
        if (is_upper(c) && (is_lower(p) || is_digit(p))) return true;
        if (c == '_' && (is_alpha(p) || is_digit(p) || (i + 1 < text.size() && is_alpha(text[i + 1])))) return true;
        if (c == '.' && is_word_char(p) && i + 1 < text.size() && is_word_char(text[i + 1])) return true;
    }
    return !text.empty() && text[0] == '_' && text.size() > 1 && is_alpha(text[1]);
}

bool is_non_english(std::string_view text) {
    std::size_t ascii_letters = 0, other_letters = 0;
    for (std::size_t i = 0; i < text.size();) {
        auto c = static_cast<unsigned char>(text[i]);
        if (c < 0x80) {
            if (is_alpha(static_cast<char>(c))) ++ascii_letters;
            ++i;
            continue;
        }
        std::size_t len = c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : c >= 0xC0 ? 2 : 1;
        char32_t cp = 0;
        if (len == 1) cp = 0xFFFD;
        else {
            cp = c & (0xFF >> (len + 1));
            for (std::size_t k = 1; k < len && i + k < text.size(); ++k) cp = (cp << 6) | (static_cast<unsigned char>(text[i + k]) & 0x3F);
        }
        i += len;
        // General punctuation, symbols, CJK punctuation and full-width forms
        // are not letters.
        bool punct = (cp >= 0x2000 && cp <= 0x2BFF) || (cp >= 0x3000 && cp <= 0x303F) ||
                     (cp >= 0xFF00 && cp <= 0xFF20) || cp == 0xFFFD || (cp >= 0xA0 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7;
        if (!punct) ++other_letters;
    }
    std::size_t letters = ascii_letters + other_letters;
    return letters > 0 && static_cast<double>(other_letters) > 0.3 * static_cast<double>(letters);
}

struct Lexicon::Impl {
    std::unordered_map<std::string, std::vector<std::string>> readings;
};

Lexicon::Lexicon() : impl_(std::make_unique<Impl>()) {}
Lexicon::~Lexicon() = default;
Lexicon::Lexicon(Lexicon&&) noexcept = default;
Lexicon& Lexicon::operator=(Lexicon&&) noexcept = default;

Lexicon Lexicon::parse(std::string_view tsv) {
    Lexicon lex;
    std::size_t pos = 0;
    while (pos < tsv.size()) {
        auto end = tsv.find('\n', pos);
        if (end == std::string_view::npos) end = tsv.size();
        auto line = tsv.substr(pos, end - pos);
        pos = end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        auto tab = line.find('\t');
        if (line.empty() || line[0] == '#' || tab == std::string_view::npos) continue;
        auto& tags = lex.impl_->readings[ascii_lower(line.substr(0, tab))];
        std::string tag(line.substr(tab + 1));
        if (std::find(tags.begin(), tags.end(), tag) == tags.end()) tags.push_back(std::move(tag));
    }
    return lex;
}

const Lexicon& Lexicon::embedded() {
    static const Lexicon lex = parse(embedded_lexicon_tsv);
    return lex;
}

std::string_view Lexicon::tag(std::string_view lower) const {
    auto it = impl_->readings.find(std::string(lower));
    return it == impl_->readings.end() ? std::string_view{} : std::string_view(it->second.front());
}

bool Lexicon::has_reading(std::string_view lower, std::string_view tag) const {
    auto it = impl_->readings.find(std::string(lower));
    if (it == impl_->readings.end()) return false;
    return std::find(it->second.begin(), it->second.end(), tag) != it->second.end();
}

bool Lexicon::can_be_verb(std::string_view lower) const {
    auto it = impl_->readings.find(std::string(lower));
    if (it == impl_->readings.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(), [](const std::string& t) { return t.rfind("VB", 0) == 0; });
}

std::size_t Lexicon::size() const noexcept { return impl_->readings.size(); }

std::string lemmatize(std::string_view lower_in, std::string_view pos, const Lexicon& lex) {
    std::string w = ascii_lower(lower_in);
    auto first_known = [&](std::initializer_list<std::string> candidates, bool verb) -> std::string {
        for (const auto& c : candidates) {
            if (c.empty()) continue;
            if (verb ? lex.can_be_verb(c) : !lex.tag(c).empty()) return c;
        }
        return {};
    };

    if (pos.rfind("VB", 0) == 0) {
        if (auto it = irregular_verbs().find(w); it != irregular_verbs().end()) return std::string(it->second);
        auto undouble = [](std::string s) {
            if (s.size() >= 2 && s[s.size() - 1] == s[s.size() - 2] && !is_vowel(s.back()) &&
                s.back() != 'l' && s.back() != 's' && s.back() != 'z') {
                s.pop_back();
            }
            return s;
        };
        if (ends_with(w, "ies") || ends_with(w, "ied")) return w.substr(0, w.size() - 3) + "y";
        for (std::string_view suffix : {"ing", "ed"}) {
            if (!ends_with(w, suffix) || w.size() < suffix.size() + 2) continue;
            std::string stem = w.substr(0, w.size() - suffix.size());
            if (auto hit = first_known({stem, stem + "e", undouble(stem)}, true); !hit.empty()) return hit;
            std::string u = undouble(stem);
            return u != stem ? u : stem;
        }
        if (ends_with(w, "s") && !ends_with(w, "ss")) {
            std::string one = w.substr(0, w.size() - 1);
            std::string two = ends_with(w, "es") ? w.substr(0, w.size() - 2) : std::string{};
            if (auto hit = first_known({one, two}, true); !hit.empty()) return hit;
            if (ends_with(w, "ches") || ends_with(w, "shes") || ends_with(w, "xes") || ends_with(w, "sses")) return two;
            return one;
        }
        return w;
    }
    if (pos == "NNS" || pos == "NNPS") {
        if (ends_with(w, "ies") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
        if (ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") && !ends_with(w, "is")) {
            std::string one = w.substr(0, w.size() - 1);
            std::string two = ends_with(w, "es") ? w.substr(0, w.size() - 2) : std::string{};
            if (auto hit = first_known({one, two}, false); !hit.empty()) return hit;
            if (ends_with(w, "ches") || ends_with(w, "shes") || ends_with(w, "xes") || ends_with(w, "sses")) return two;
            return one;
        }
    }
    return w;
}

namespace {

std::string unknown_word_tag(std::string_view surface, std::string_view lower, bool initial, const Lexicon& lex) {
    bool all_caps = surface.size() > 1 && std::all_of(surface.begin(), surface.end(), [](char c) { return is_upper(c) || is_digit(c); });
    if (all_caps) return "NN";
    if (ends_with(lower, "ly")) return "RB";
    if (ends_with(lower, "ing")) return "VBG";
    if (ends_with(lower, "ed")) return "VBD";
    if (ends_with(lower, "ize") || ends_with(lower, "ify")) return "VB";
    for (std::string_view s : {"able", "ible", "ous", "ful", "ive", "less", "ic", "al"}) {
        if (ends_with(lower, s)) return "JJ";
    }
    if (ends_with(lower, "s") && !ends_with(lower, "ss") && !ends_with(lower, "us")) {
        std::string stem(lower.substr(0, lower.size() - 1));
        auto tag = lex.tag(stem);
        if (!tag.empty() && tag.rfind("VB", 0) == 0) return "VBZ";
        return "NNS";
    }
    if (!initial && is_upper(surface[0])) return "NNP";
    return "NN";
}

bool starts_sentence(const std::vector<Token>& done) {
    if (done.empty()) return true;
    const auto& prev = done.back();
    return prev.pos == "." || prev.surface == ":" || prev.pos == "``";
}

}  // namespace

TaggedText pos_tag(const std::vector<std::string>& tokens, const Lexicon& lex) {
    TaggedText out;
    out.tokens.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        Token t;
        t.surface = tokens[i];
        t.lower = ascii_lower(t.surface);
        t.index = i;
        const bool initial = starts_sentence(out.tokens);
        const std::string prev = out.tokens.empty() ? std::string{} : out.tokens.back().pos;

        if (t.surface.empty()) t.pos = "SYM";
        else if (all_punct(t.surface)) t.pos = punct_tag(t.surface);
        else if (is_number(t.surface)) t.pos = "CD";
        else if (is_code_like(t.surface) && lex.tag(t.lower).empty()) t.pos = "NN";
        else if (auto known = lex.tag(t.lower); !known.empty()) t.pos = std::string(known);
        else t.pos = unknown_word_tag(t.surface, t.lower, initial, lex);

        bool open_word = std::any_of(t.lower.begin(), t.lower.end(), is_alpha) && !is_code_like(t.surface);
        if (open_word && (prev == "TO" || prev == "MD") && lex.has_reading(t.lower, "VB")) {
            t.pos = "VB";
        } else if (open_word && (prev == "DT" || prev == "PRP$") && t.pos == "VB" && lex.has_reading(t.lower, "NN")) {
            t.pos = "NN";
        } else if (open_word && (prev == "PRP" || prev == "WDT" || prev == "WP" || prev == "RB") && t.pos == "NNS" &&
                   lex.has_reading(lemmatize(t.lower, "VBZ", lex), "VB")) {
            t.pos = "VBZ";  // "it returns", "which holds", "then clears"
        }
        if (initial && open_word) {
            // Imperative: a base-form verb reading wins at sentence start.
            if (lex.has_reading(t.lower, "VB")) {
                t.pos = "VB";
            } else if ((t.pos == "VBN" || t.pos == "VBD" || t.pos == "VBP") && lemmatize(t.lower, "VB", lex) == t.lower) {
                t.pos = "VB";
            } else if (t.pos == "NNS" && lex.can_be_verb(lemmatize(t.lower, "VBZ", lex))) {
                t.pos = "VBZ";
            }
        }
        out.tokens.push_back(std::move(t));
    }
    return out;
}

TaggedText analyze(std::string_view text, const Lexicon& lex) {
    auto tagged = pos_tag(tokenize(text), lex);
    tagged.has_symbol = has_symbol(text);
    return tagged;
}

std::vector<VerbNounPair> extract_verb_noun_pairs(const TaggedText& tagged, const Lexicon& lex) {
    static constexpr std::array<std::string_view, 5> verb_tags = {"VB", "VBZ", "VBP", "VBD", "VBG"};
    auto is_noun = [](const Token& t) {
        return (t.pos == "NN" || t.pos == "NNS" || t.pos == "NNP" || t.pos == "NNPS") &&
               std::all_of(t.surface.begin(), t.surface.end(), [](char c) { return is_alpha(c) || c == '-' || c == '\''; });
    };
    auto stops = [&is_noun](const Token& t) {
        if (t.pos.rfind("NN", 0) == 0 && !is_noun(t)) return true;  // code token
        return t.pos.rfind("VB", 0) == 0 || t.pos == "." || t.pos == "," || t.pos == ":" || t.pos == "(" || t.pos == ")";
    };
    const auto& toks = tagged.tokens;
    std::vector<VerbNounPair> out;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (std::find(verb_tags.begin(), verb_tags.end(), toks[i].pos) == verb_tags.end()) continue;
        std::size_t j = i + 1;
        while (j < toks.size() && !is_noun(toks[j]) && !stops(toks[j])) ++j;
        if (j >= toks.size() || !is_noun(toks[j])) continue;
        while (j + 1 < toks.size() && is_noun(toks[j + 1])) ++j;
        out.push_back(VerbNounPair{lemmatize(toks[i].lower, "VB", lex), lemmatize(toks[j].lower, toks[j].pos, lex), i, j});
    }
    return out;
}

}  // namespace commentlens::nlp
