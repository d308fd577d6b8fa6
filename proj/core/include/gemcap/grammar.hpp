#pragma once

#include <string>
#include <vector>

#include "gemcap/lexicon.hpp"
#include "gemcap/rng.hpp"

namespace gemcap {

/// The three linguistic tiers. Basic is noun+noun, Normal adds plain
/// adjectives and stone phrases, Complete adds optional superlatives and
/// connective complements. Acceptance is monotone: every Basic-valid
/// caption is Normal-valid and every Normal-valid caption is
/// Complete-valid.
enum class DescriptionLevel { Basic, Normal, Complete };

std::string level_name(DescriptionLevel level);
DescriptionLevel level_from_name(const std::string& name);

/// Lowercases, splits sentence punctuation into their own tokens and joins
/// multiword lexicon terms ("yellow gold", "adorned with") into single
/// underscore tokens by longest match. Hyphens are word characters.
std::vector<std::string> tokenize(const std::string& caption, const Lexicon& lexicon);

/// Inverse of tokenize up to capitalization: lowercase text, single
/// spaces, no space before sentence punctuation, underscores restored to
/// spaces.
std::string detokenize(const std::vector<std::string>& tokens);

/// Uppercases the first letter; generation and stripping emit
/// sentence-cased captions.
std::string sentence_case(std::string text);

/// Plural surface form of a stone term ("topaz" -> "topazes",
/// "ruby" -> "rubies"); multiword terms pluralize their last word.
std::string pluralize(const std::string& term);

struct ValidationResult {
    bool valid = false;
    std::string reason; // empty when valid
    int position = -1;  // failing token index, -1 when valid

    explicit operator bool() const { return valid; }
};

/// Parses a caption against the level grammar (recursive descent over
/// category sequences). Invalid results carry a diagnosis and the token
/// position. Levels below Complete reject superlative tokens and the
/// "adorned with"/"featuring" connectives.
ValidationResult validate_description(const std::string& caption, DescriptionLevel level,
                                      const Lexicon& lexicon);

/// Every surface form the templates can produce for this record at this
/// level, in fixed template order. generate_description picks one of
/// these via the rng.
std::vector<std::string> generate_all(const JewelryRecord& record, DescriptionLevel level,
                                      bool superlatives, const Lexicon& lexicon);

/// Renders one description of the record at the given level; the surface
/// form among the applicable templates is chosen deterministically from
/// the rng (one draw, modulo the variant count). Superlatives are consumed
/// from record.style_adjectives in template slot order when enabled.
std::string generate_description(const JewelryRecord& record, DescriptionLevel level,
                                 bool superlatives, Rng& rng, const Lexicon& lexicon);

/// Removes every superlative token from a Complete-valid caption,
/// normalizes "adorned with" to "with" and drops or rewrites "featuring",
/// then repairs commas and whitespace. The result is Complete-valid and
/// the operation is idempotent. Throws GrammarError when the input does
/// not validate at Complete.
std::string strip_superlatives(const std::string& caption, const Lexicon& lexicon);

} // namespace gemcap
