#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace commentlens::nlp {

/// The 36 Penn Treebank word tags.
std::span<const std::string_view> penn_tags() noexcept;
/// Word tags plus the punctuation tags the tagger emits.
bool is_valid_tag(std::string_view tag) noexcept;

struct Token {
    std::string surface;
    std::string lower;
    std::string pos;
    std::size_t index = 0;
    friend bool operator==(const Token&, const Token&) = default;
};

struct TaggedText {
    std::vector<Token> tokens;
    bool has_symbol = false;
    friend bool operator==(const TaggedText&, const TaggedText&) = default;
};

/// Whitespace split with terminal punctuation and stray brackets or quotes
/// peeled off. Code-like tokens (`foo.bar()`, `max_len`, `wantsPrefix`)
/// stay whole.
std::vector<std::string> tokenize(std::string_view text);

/// True when the text contains any of `( ) { } [ ] ; = < > + * /`, or a
/// camelCase token, an underscore inside a word, or a dot between
/// identifier characters.
bool has_symbol(std::string_view text);

/// More than 30% of the letters are non-ASCII.
bool is_non_english(std::string_view text);

class Lexicon {
public:
    /// Parses `word<TAB>TAG` lines. The first entry of a word is its
    /// default tag; later entries record alternative readings.
    static Lexicon parse(std::string_view tsv);
    /// The lexicon compiled into the library.
    static const Lexicon& embedded();

    /// Default tag, or empty when the word is unknown.
    std::string_view tag(std::string_view lower) const;
    bool has_reading(std::string_view lower, std::string_view tag) const;
    /// Any reading starts with VB.
    bool can_be_verb(std::string_view lower) const;
    std::size_t size() const noexcept;

    Lexicon();
    ~Lexicon();
    Lexicon(Lexicon&&) noexcept;
    Lexicon& operator=(Lexicon&&) noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Deterministic rule tagger over the lexicon: lexicon lookup, suffix
/// rules for unknown words, a few contextual fixes, and the imperative
/// rule turning a sentence-initial verb reading into VB.
TaggedText pos_tag(const std::vector<std::string>& tokens, const Lexicon& lexicon = Lexicon::embedded());

/// tokenize + pos_tag, with has_symbol computed on the original text.
TaggedText analyze(std::string_view text, const Lexicon& lexicon = Lexicon::embedded());

/// Base form by suffix stripping with doubling and e-restoration, checked
/// against the lexicon where possible. `pos` selects verb or noun rules.
std::string lemmatize(std::string_view lower, std::string_view pos, const Lexicon& lexicon = Lexicon::embedded());

struct VerbNounPair {
    std::string verb;
    std::string noun;
    std::size_t verb_index = 0;
    std::size_t noun_index = 0;
    friend bool operator==(const VerbNounPair&, const VerbNounPair&) = default;
};

/// Pairs each verb (VB, VBZ, VBP, VBD, VBG) with the head of the nearest
/// following noun run. The search stops at the next verb or punctuation.
std::vector<VerbNounPair> extract_verb_noun_pairs(const TaggedText& tagged, const Lexicon& lexicon = Lexicon::embedded());

}  // namespace commentlens::nlp
