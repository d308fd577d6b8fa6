#include "gemcap/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

#include "gemcap/error.hpp"

namespace gemcap {

std::string level_name(DescriptionLevel level) {
    switch (level) {
    case DescriptionLevel::Basic: return "basic";
    case DescriptionLevel::Normal: return "normal";
    case DescriptionLevel::Complete: return "complete";
    }
    return "?";
}

DescriptionLevel level_from_name(const std::string& name) {
    if (name == "basic") return DescriptionLevel::Basic;
    if (name == "normal") return DescriptionLevel::Normal;
    if (name == "complete") return DescriptionLevel::Complete;
    throw GrammarError("unknown description level: " + name);
}

namespace {

bool is_sentence_punct(char c) {
    return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?';
}

std::string to_lower(std::string s) {
    for (char& c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string term_of(const std::string& token) {
    std::string t = token;
    std::replace(t.begin(), t.end(), '_', ' ');
    return t;
}

std::string token_of(const std::string& term) {
    std::string t = term;
    std::replace(t.begin(), t.end(), ' ', '_');
    return t;
}

bool is_punct_token(const std::string& tok) {
    return tok.size() == 1 && is_sentence_punct(tok[0]);
}

std::vector<std::string> singular_candidates(const std::string& term) {
    std::vector<std::string> out{term};
    const auto n = term.size();
    if (n > 3 && term.ends_with("ies"))
        out.push_back(term.substr(0, n - 3) + "y");
    if (n > 2 && term.ends_with("es"))
        out.push_back(term.substr(0, n - 2));
    if (n > 1 && term.ends_with("s"))
        out.push_back(term.substr(0, n - 1));
    return out;
}

} // namespace

std::string pluralize(const std::string& term) {
    const auto space = term.rfind(' ');
    const std::string head = space == std::string::npos ? "" : term.substr(0, space + 1);
    std::string w = space == std::string::npos ? term : term.substr(space + 1);

    auto is_vowel = [](char c) { return std::string_view("aeiou").find(c) != std::string_view::npos; };
    if (w.size() > 1 && w.back() == 'y' && !is_vowel(w[w.size() - 2]))
        return head + w.substr(0, w.size() - 1) + "ies";
    if (w.ends_with("s") || w.ends_with("x") || w.ends_with("z") || w.ends_with("ch") ||
        w.ends_with("sh"))
        return head + w + "es";
    return head + w + "s";
}

std::vector<std::string> tokenize(const std::string& caption, const Lexicon& lexicon) {
    std::vector<std::string> words;
    std::string cur;
    for (char raw : to_lower(caption)) {
        if (is_sentence_punct(raw)) {
            if (!cur.empty()) {
                words.push_back(cur);
                cur.clear();
            }
            words.push_back(std::string(1, raw));
        } else if (std::isspace(static_cast<unsigned char>(raw))) {
            if (!cur.empty()) {
                words.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(raw);
        }
    }
    if (!cur.empty())
        words.push_back(cur);

    // longest-match joining of multiword lexicon terms
    std::size_t max_words = 1;
    for (const auto& mw : lexicon.multiword_terms())
        max_words = std::max(max_words,
                             static_cast<std::size_t>(std::count(mw.begin(), mw.end(), ' ')) + 1);

    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < words.size()) {
        bool joined = false;
        for (std::size_t k = std::min(max_words, words.size() - i); k >= 2 && !joined; --k) {
            bool any_punct = false;
            std::string phrase;
            for (std::size_t j = 0; j < k; ++j) {
                if (is_punct_token(words[i + j])) {
                    any_punct = true;
                    break;
                }
                if (j)
                    phrase += ' ';
                phrase += words[i + j];
            }
            if (any_punct)
                continue;
            // match plural surface forms of multiword terms too
            bool known = lexicon.has_term(phrase);
            if (!known)
                for (const auto& cand : singular_candidates(phrase))
                    if (lexicon.has_term(cand)) {
                        known = true;
                        break;
                    }
            if (known) {
                tokens.push_back(token_of(phrase));
                i += k;
                joined = true;
            }
        }
        if (!joined) {
            tokens.push_back(words[i]);
            ++i;
        }
    }
    return tokens;
}

std::string detokenize(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& tok : tokens) {
        if (is_punct_token(tok)) {
            out += tok;
        } else {
            if (!out.empty())
                out += ' ';
            out += term_of(tok);
        }
    }
    return out;
}

std::string sentence_case(std::string text) {
    for (char& c : text)
        if (std::isalpha(static_cast<unsigned char>(c))) {
            c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            break;
        }
    return text;
}

// ---------------------------------------------------------------- validation

namespace {

struct TokenInfo {
    bool type = false, material = false, stone = false, stone_was_plural = false;
    bool color = false, adjective = false, superlative = false, feature = false;
};

TokenInfo classify(const std::string& token, const Lexicon& lex) {
    TokenInfo info;
    const std::string term = term_of(token);
    info.type = lex.has(term, TermCategory::JewelryType);
    info.material = lex.has(term, TermCategory::Material);
    info.color = lex.has(term, TermCategory::Color);
    info.adjective = lex.has(term, TermCategory::Adjective);
    info.superlative = lex.has(term, TermCategory::Superlative);
    info.feature = lex.has(term, TermCategory::Feature);
    for (const auto& cand : singular_candidates(term)) {
        if (lex.is_stone(cand)) {
            info.stone = true;
            info.stone_was_plural = cand != term;
            break;
        }
    }
    return info;
}

// Recursive-descent matcher over category sequences. Alternatives
// backtrack; `furthest` records the deepest failure for diagnosis.
struct Parser {
    const std::vector<std::string>& toks;
    const Lexicon& lex;
    DescriptionLevel level;
    int furthest = 0;

    bool at(int p, const char* lit) const {
        return p < static_cast<int>(toks.size()) && toks[static_cast<std::size_t>(p)] == lit;
    }
    TokenInfo info(int p) const {
        static const TokenInfo none{};
        if (p >= static_cast<int>(toks.size()))
            return none;
        return classify(toks[static_cast<std::size_t>(p)], lex);
    }
    void note(int p) { furthest = std::max(furthest, p); }

    bool mods_allowed() const { return level != DescriptionLevel::Basic; }
    bool sups_allowed() const { return level == DescriptionLevel::Complete; }

    // ((Sup|Adj) (","? (Sup|Adj))*)? — zero or more modifiers, optional
    // commas between them.
    void mods(int& p) {
        if (!mods_allowed())
            return;
        bool have_any = false;
        while (true) {
            int q = p;
            if (have_any && at(q, ","))
                ++q;
            const TokenInfo ti = info(q);
            const bool ok = ti.adjective || (sups_allowed() && ti.superlative);
            if (!ok)
                break;
            p = q + 1;
            have_any = true;
        }
    }

    bool noun(int& p, bool TokenInfo::* member) {
        int q = p;
        mods(q);
        if (!(info(q).*member)) {
            note(q);
            return false;
        }
        p = q + 1;
        return true;
    }

    bool type_np(int& p) { return noun(p, &TokenInfo::type); }
    bool material_np(int& p) { return noun(p, &TokenInfo::material); }
    bool feature_np(int& p) { return noun(p, &TokenInfo::feature); }
    bool stone_np(int& p) { return noun(p, &TokenInfo::stone); }

    bool stone_sg(int& p) { // attributive (singular) stone, modifiers allowed
        int q = p;
        mods(q);
        const TokenInfo ti = info(q);
        if (!ti.stone || ti.stone_was_plural) {
            note(q);
            return false;
        }
        p = q + 1;
        return true;
    }

    bool lit(int& p, const char* word) {
        if (!at(p, word)) {
            note(p);
            return false;
        }
        ++p;
        return true;
    }

    // complement forms; gates depend on level
    bool complement(int& p) {
        const bool normal_up = level != DescriptionLevel::Basic;
        const bool complete = level == DescriptionLevel::Complete;
        int q;

        if (normal_up) {
            // "with a <stone> <feature>"
            q = p;
            if (lit(q, "with") && lit(q, "a") && stone_sg(q) && feature_np(q)) {
                p = q;
                return true;
            }
            // "with a <feature>"
            q = p;
            if (lit(q, "with") && lit(q, "a") && feature_np(q)) {
                p = q;
                return true;
            }
            // "with <stone phrase>"
            q = p;
            if (lit(q, "with") && stone_np(q)) {
                p = q;
                return true;
            }
        }
        if (complete) {
            // "adorned with <stone phrase>"
            q = p;
            if (lit(q, "adorned_with") && stone_np(q)) {
                p = q;
                return true;
            }
            // ["and"] "featuring" ["a"] <feature>
            q = p;
            {
                int r = q;
                if (at(r, "and"))
                    ++r;
                if (lit(r, "featuring")) {
                    if (at(r, "a"))
                        ++r;
                    if (feature_np(r)) {
                        p = r;
                        return true;
                    }
                }
            }
            // "and" ["a"] <feature>
            q = p;
            if (lit(q, "and")) {
                if (at(q, "a"))
                    ++q;
                if (feature_np(q)) {
                    p = q;
                    return true;
                }
            }
        }
        note(p);
        return false;
    }

    // complements then terminal period
    bool tail(int p) {
        if (at(p, ".") && p + 1 == static_cast<int>(toks.size()))
            return true;
        if (level == DescriptionLevel::Basic) {
            note(p);
            return false;
        }
        int q = p;
        if (complement(q) && tail(q))
            return true;
        note(p);
        return false;
    }

    bool sentence() {
        const bool normal_up = level != DescriptionLevel::Basic;
        int p;

        // <material> "and" <stone> <type> ...
        if (normal_up) {
            p = 0;
            if (material_np(p) && lit(p, "and") && stone_sg(p) && type_np(p) && tail(p))
                return true;
        }
        // ["a"] <type> "in" <material> ...
        {
            p = 0;
            if (normal_up && at(p, "a"))
                ++p;
            if (type_np(p) && lit(p, "in") && material_np(p) && tail(p))
                return true;
        }
        // ["a"] <material> <type> ...
        {
            p = 0;
            if (normal_up && at(p, "a"))
                ++p;
            if (material_np(p) && type_np(p) && tail(p))
                return true;
        }
        // "a" <type> "with" "a" <feature> "."  (noun + noun through a feature)
        {
            p = 0;
            if (lit(p, "a") && type_np(p) && lit(p, "with") && lit(p, "a") && feature_np(p) &&
                at(p, ".") && p + 1 == static_cast<int>(toks.size()))
                return true;
        }
        return false;
    }
};

} // namespace

ValidationResult validate_description(const std::string& caption, DescriptionLevel level,
                                      const Lexicon& lexicon) {
    const std::vector<std::string> toks = tokenize(caption, lexicon);
    if (toks.empty())
        return {false, "empty caption", 0};

    if (level != DescriptionLevel::Complete) {
        for (std::size_t i = 0; i < toks.size(); ++i) {
            const std::string term = term_of(toks[i]);
            if (lexicon.has(term, TermCategory::Superlative))
                return {false, "superlative '" + term + "' not allowed at " + level_name(level) +
                                   " level",
                        static_cast<int>(i)};
            if (term == "adorned with" || term == "featuring")
                return {false, "connective '" + term + "' not allowed at " + level_name(level) +
                                   " level",
                        static_cast<int>(i)};
        }
    }

    for (std::size_t i = 0; i < toks.size(); ++i) {
        const std::string& tok = toks[i];
        if (is_punct_token(tok))
            continue;
        const TokenInfo ti = classify(tok, lexicon);
        const std::string term = term_of(tok);
        const bool connective = lexicon.has(term, TermCategory::Connective);
        if (!(ti.type || ti.material || ti.stone || ti.color || ti.adjective ||
              ti.superlative || ti.feature || connective))
            return {false, "token '" + term + "' not in the lexicon", static_cast<int>(i)};
    }

    Parser parser{toks, lexicon, level};
    if (parser.sentence())
        return {true, "", -1};
    const int pos = std::min(parser.furthest, static_cast<int>(toks.size()) - 1);
    return {false,
            "does not match any " + level_name(level) + " production near '" +
                toks[static_cast<std::size_t>(pos)] + "'",
            pos};
}

// ---------------------------------------------------------------- generation

namespace {

// Record fields digested for template slots.
struct Slots {
    std::string type, base_type, material;
    std::string stone;       // singular term, empty when none
    int stone_count = 0;
    std::string stone_adjs;  // space-joined plain adjectives
    std::string feature;     // first feature noun, empty when none
    std::vector<std::string> sups;

    std::string stone_surface() const {
        return stone_count > 1 ? pluralize(stone) : stone;
    }
    std::string sup(std::size_t i) const { return i < sups.size() ? sups[i] : ""; }
};

Slots digest(const JewelryRecord& r, bool superlatives, const Lexicon& lex) {
    Slots s;
    s.type = r.jewelry_type;
    s.base_type = lex.base_type(r.jewelry_type);
    s.material = r.materials.empty() ? "" : r.materials.front();
    if (!r.stones.empty()) {
        s.stone = r.stones.front();
        s.stone_count = static_cast<int>(r.stones.size());
    }
    for (const auto& f : r.features) {
        if (lex.has(f, TermCategory::Adjective)) {
            if (!s.stone_adjs.empty())
                s.stone_adjs += ' ';
            s.stone_adjs += f;
        } else if (s.feature.empty() && lex.has(f, TermCategory::Feature)) {
            s.feature = f;
        }
    }
    if (superlatives)
        s.sups = r.style_adjectives;
    return s;
}

// join non-empty parts with single spaces
std::string join(std::initializer_list<std::string> parts) {
    std::string out;
    for (const auto& p : parts) {
        if (p.empty())
            continue;
        if (!out.empty())
            out += ' ';
        out += p;
    }
    return out;
}

std::string finish(std::string s) {
    return sentence_case(std::move(s) + ".");
}

// modifier group "sup, adjs" with the comma only between both halves
std::string comma_mods(const std::string& sup, const std::string& adjs) {
    if (!sup.empty() && !adjs.empty())
        return sup + ", " + adjs;
    return sup.empty() ? adjs : sup;
}

std::vector<std::string> templates_for(const Slots& s, DescriptionLevel level) {
    std::vector<std::string> out;
    const bool has_stone = !s.stone.empty();
    const bool has_feature = !s.feature.empty();
    const bool has_material = !s.material.empty();

    switch (level) {
    case DescriptionLevel::Basic:
        if (has_material) {
            out.push_back(finish(join({s.type, "in", s.material})));
            out.push_back(finish(join({s.material, s.type})));
        }
        if (has_feature)
            out.push_back(finish(join({"a", s.type, "with a", s.feature})));
        break;

    case DescriptionLevel::Normal:
        if (has_stone && has_material) {
            out.push_back(finish(join({s.material, "and", s.stone, s.type})));
            out.push_back(finish(join(
                {s.base_type, "in", s.material, "with", s.stone_adjs, s.stone_surface()})));
            out.push_back(finish(join({s.material, s.type, "with", s.stone_surface()})));
            if (has_feature)
                out.push_back(finish(
                    join({"a", s.material, s.type, "with a", s.stone, s.feature})));
        } else {
            // stone-less records fall back to the basic forms
            if (has_material) {
                out.push_back(finish(join({s.type, "in", s.material})));
                out.push_back(finish(join({s.material, s.type})));
            }
            if (has_feature)
                out.push_back(finish(join({"a", s.type, "with a", s.feature})));
        }
        break;

    case DescriptionLevel::Complete:
        if (has_stone && has_material) {
            if (has_feature)
                out.push_back(finish(join({s.type, "in", s.sup(0), s.material, "adorned with",
                                           comma_mods(s.sup(1), s.stone_adjs),
                                           s.stone_surface(), "and featuring a", s.sup(2),
                                           s.feature})));
            out.push_back(finish(join({s.sup(0), s.type, "in", s.material, "with",
                                       s.stone_adjs, s.stone_surface()})));
            out.push_back(finish(join({s.sup(0), s.material, s.type, "adorned with",
                                       join({s.sup(1), s.stone_adjs}), s.stone_surface()})));
            if (has_feature)
                out.push_back(finish(
                    join({"a", s.sup(0), s.material, s.type, "with a", s.stone, s.feature})));
        } else {
            if (has_material) {
                out.push_back(finish(join({s.type, "in", s.sup(0), s.material})));
                out.push_back(finish(join({s.sup(0), s.material, s.type})));
            }
            if (has_feature)
                out.push_back(finish(join({"a", s.type, "with a", s.feature})));
        }
        break;
    }
    return out;
}

} // namespace

std::vector<std::string> generate_all(const JewelryRecord& record, DescriptionLevel level,
                                      bool superlatives, const Lexicon& lexicon) {
    validate_record(record, lexicon);
    return templates_for(digest(record, superlatives, lexicon), level);
}

std::string generate_description(const JewelryRecord& record, DescriptionLevel level,
                                 bool superlatives, Rng& rng, const Lexicon& lexicon) {
    const std::vector<std::string> variants = generate_all(record, level, superlatives, lexicon);
    if (variants.empty())
        throw IncompleteRecord("record cannot fill any " + level_name(level) + " template");
    return variants[rng.next_below(variants.size())];
}

// ------------------------------------------------------------------ stripping

std::string strip_superlatives(const std::string& caption, const Lexicon& lexicon) {
    const ValidationResult check =
        validate_description(caption, DescriptionLevel::Complete, lexicon);
    if (!check)
        throw GrammarError("strip_superlatives input invalid at complete level: " + check.reason);

    std::vector<std::string> toks = tokenize(caption, lexicon);

    // drop superlatives, taking an adjacent list comma with each
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const std::string term = term_of(toks[i]);
        if (lexicon.has(term, TermCategory::Superlative)) {
            if (i + 1 < toks.size() && toks[i + 1] == ",")
                ++i; // consume the comma after "exquisite," too
            else if (!kept.empty() && kept.back() == ",")
                kept.pop_back();
            continue;
        }
        kept.push_back(toks[i]);
    }

    // normalize connectives
    std::vector<std::string> out;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (kept[i] == "adorned_with") {
            out.push_back("with");
        } else if (kept[i] == "featuring") {
            if (!out.empty() && out.back() == "and")
                continue; // "and featuring" -> "and"
            out.push_back("with");
        } else {
            out.push_back(kept[i]);
        }
    }

    std::string result = sentence_case(detokenize(out));
    const ValidationResult post =
        validate_description(result, DescriptionLevel::Complete, lexicon);
    if (!post)
        throw GrammarError("strip_superlatives produced an invalid caption: " + post.reason);
    return result;
}

} // namespace gemcap
