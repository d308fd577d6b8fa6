#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "gemcap/grammar.hpp"
#include "gemcap/lexicon.hpp"

namespace gemcap {

/// Bidirectional token<->id map for the decoder. Ids 0..3 are reserved
/// for <pad>, <start>, <end>, <unk>; the rest are dense and assigned by
/// (frequency desc, lexicographic asc), so the same corpus in any order
/// builds the same vocabulary.
class Vocabulary {
public:
    static constexpr int kPad = 0;
    static constexpr int kStart = 1;
    static constexpr int kEnd = 2;
    static constexpr int kUnk = 3;

    Vocabulary();

    /// Build from raw captions (tokenized against the lexicon).
    static Vocabulary build(const std::vector<std::string>& captions, const Lexicon& lexicon);

    /// Build from pre-tokenized sequences.
    static Vocabulary from_token_lists(const std::vector<std::vector<std::string>>& lists);

    /// Rebuild from an ordered token table (checkpoint restore).
    static Vocabulary from_table(std::vector<std::string> tokens);

    int id_of(const std::string& token) const; // kUnk when missing
    const std::string& token_of(int id) const;
    bool contains(const std::string& token) const;

    int size() const { return static_cast<int>(tokens_.size()); }
    const std::vector<std::string>& tokens() const { return tokens_; }

    std::vector<int> encode(const std::vector<std::string>& tokens) const;
    std::vector<std::string> decode(const std::vector<int>& ids) const;

    bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, int> ids_;
};

} // namespace gemcap
