#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gemcap {

enum class TermCategory {
    JewelryType,
    Material,
    StonePrecious,
    StoneSemiPrecious,
    Color,
    Adjective,
    Superlative,
    Connective,
    Feature,
};

std::string category_name(TermCategory cat);
TermCategory category_from_name(const std::string& name);

struct LexiconEntry {
    std::string term;
    TermCategory category;
    std::string gloss;
    std::vector<std::pair<std::string, std::string>> relations; // (kind, term)

    bool operator==(const LexiconEntry&) const = default;
};

/// The jewelry terminology base: types, materials, stones, colors,
/// adjectives, superlatives, connectives and features, with light
/// relations between terms. Immutable after load; safe for concurrent
/// readers.
class Lexicon {
public:
    /// The built-in terminology shipped with the project: the jewelry
    /// taxonomy, the seven precious stones, the semi-precious list, the
    /// materials and the closed connective inventory.
    static const Lexicon& builtin();

    /// Parse a lexicon from JSON text: an array of
    /// {term, category, gloss, relations:[{kind, term}]}.
    /// Empty or whitespace-only text yields an empty, valid lexicon.
    static Lexicon parse(const std::string& json_text);

    /// Read a lexicon file from disk.
    static Lexicon load(const std::string& path);

    /// Serialize back to JSON (canonical key order, 2-space indent).
    std::string dump() const;

    void add(LexiconEntry entry); // throws LexiconConflict on (term, category) reuse

    bool has(const std::string& term, TermCategory cat) const;
    bool has_term(const std::string& term) const;
    const LexiconEntry* find(const std::string& term, TermCategory cat) const;
    std::vector<const LexiconEntry*> in_category(TermCategory cat) const;

    bool is_stone(const std::string& term) const;

    /// Base type of a term via its "base_type" relation (e.g. a solitaire
    /// is a ring). Falls back to the term itself.
    std::string base_type(const std::string& term) const;

    /// Terms containing spaces, longest (by word count) first; drives the
    /// tokenizer's longest-match joining.
    const std::vector<std::string>& multiword_terms() const { return multiword_; }

    std::size_t size() const { return entries_.size(); }
    const std::vector<LexiconEntry>& entries() const { return entries_; }

private:
    std::vector<LexiconEntry> entries_;
    std::vector<std::string> multiword_;
};

/// Structured semantic description of one jewelry item; the source of
/// truth every caption is generated from. Stone duplicates encode count
/// (a bracelet with three topazes lists "topaz" three times), which
/// drives pluralization. `features` carries both adjective-like details
/// (a cut, a position) and feature nouns (a clasp, a pendant); templates
/// route each by its lexicon category. `style_adjectives` lists the
/// superlatives templates may consume, in order.
struct JewelryRecord {
    std::string jewelry_type;
    std::vector<std::string> materials;
    std::vector<std::string> stones;
    std::vector<std::string> colors;
    std::vector<std::string> features;
    std::vector<std::string> style_adjectives;

    bool operator==(const JewelryRecord&) const = default;
};

/// Checks that every record field resolves in the lexicon. Throws
/// IncompleteRecord for a missing jewelry_type or empty materials,
/// LexiconMiss for unknown terms.
void validate_record(const JewelryRecord& record, const Lexicon& lexicon);

} // namespace gemcap
