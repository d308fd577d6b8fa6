#include "gemcap/vocab.hpp"

#include <algorithm>
#include <map>

#include "gemcap/error.hpp"

namespace gemcap {

namespace {
const std::vector<std::string> kReserved = {"<pad>", "<start>", "<end>", "<unk>"};
}

Vocabulary::Vocabulary() {
    tokens_ = kReserved;
    for (int i = 0; i < static_cast<int>(tokens_.size()); ++i)
        ids_[tokens_[static_cast<std::size_t>(i)]] = i;
}

Vocabulary Vocabulary::build(const std::vector<std::string>& captions, const Lexicon& lexicon) {
    std::vector<std::vector<std::string>> lists;
    lists.reserve(captions.size());
    for (const auto& c : captions)
        lists.push_back(tokenize(c, lexicon));
    return from_token_lists(lists);
}

Vocabulary Vocabulary::from_token_lists(const std::vector<std::vector<std::string>>& lists) {
    std::map<std::string, long> freq; // ordered map fixes the tie ordering
    for (const auto& list : lists)
        for (const auto& tok : list)
            ++freq[tok];
    for (const auto& r : kReserved)
        freq.erase(r);

    std::vector<std::pair<std::string, long>> ranked(freq.begin(), freq.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });

    Vocabulary v;
    for (const auto& [tok, n] : ranked) {
        (void)n;
        v.ids_[tok] = static_cast<int>(v.tokens_.size());
        v.tokens_.push_back(tok);
    }
    return v;
}

Vocabulary Vocabulary::from_table(std::vector<std::string> tokens) {
    if (tokens.size() < kReserved.size() ||
        !std::equal(kReserved.begin(), kReserved.end(), tokens.begin()))
        throw CheckpointFormatError("vocabulary table must start with the reserved tokens");
    Vocabulary v;
    v.tokens_ = std::move(tokens);
    v.ids_.clear();
    for (int i = 0; i < static_cast<int>(v.tokens_.size()); ++i)
        v.ids_[v.tokens_[static_cast<std::size_t>(i)]] = i;
    return v;
}

int Vocabulary::id_of(const std::string& token) const {
    const auto it = ids_.find(token);
    return it == ids_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token_of(int id) const {
    if (id < 0 || id >= size())
        throw VocabOverflow("token id " + std::to_string(id) + " outside vocab of " +
                            std::to_string(size()));
    return tokens_[static_cast<std::size_t>(id)];
}

bool Vocabulary::contains(const std::string& token) const {
    return ids_.find(token) != ids_.end();
}

std::vector<int> Vocabulary::encode(const std::vector<std::string>& tokens) const {
    std::vector<int> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens)
        out.push_back(id_of(t));
    return out;
}

std::vector<std::string> Vocabulary::decode(const std::vector<int>& ids) const {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (int id : ids)
        out.push_back(token_of(id));
    return out;
}

} // namespace gemcap
