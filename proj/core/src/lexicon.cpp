#include "gemcap/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gemcap/error.hpp"

namespace gemcap {

std::string category_name(TermCategory cat) {
    switch (cat) {
    case TermCategory::JewelryType: return "jewelry_type";
    case TermCategory::Material: return "material";
    case TermCategory::StonePrecious: return "stone_precious";
    case TermCategory::StoneSemiPrecious: return "stone_semi_precious";
    case TermCategory::Color: return "color";
    case TermCategory::Adjective: return "adjective";
    case TermCategory::Superlative: return "superlative";
    case TermCategory::Connective: return "connective";
    case TermCategory::Feature: return "feature";
    }
    return "?";
}

TermCategory category_from_name(const std::string& name) {
    if (name == "jewelry_type") return TermCategory::JewelryType;
    if (name == "material") return TermCategory::Material;
    if (name == "stone_precious") return TermCategory::StonePrecious;
    if (name == "stone_semi_precious") return TermCategory::StoneSemiPrecious;
    if (name == "color") return TermCategory::Color;
    if (name == "adjective") return TermCategory::Adjective;
    if (name == "superlative") return TermCategory::Superlative;
    if (name == "connective") return TermCategory::Connective;
    if (name == "feature") return TermCategory::Feature;
    throw LexiconParseError("unknown lexicon category: " + name);
}

void Lexicon::add(LexiconEntry entry) {
    if (find(entry.term, entry.category))
        throw LexiconConflict("duplicate term '" + entry.term + "' in category " +
                              category_name(entry.category));
    if (entry.term.find(' ') != std::string::npos &&
        std::find(multiword_.begin(), multiword_.end(), entry.term) == multiword_.end()) {
        multiword_.push_back(entry.term);
        std::sort(multiword_.begin(), multiword_.end(),
                  [](const std::string& a, const std::string& b) {
                      const auto words = [](const std::string& s) {
                          return std::count(s.begin(), s.end(), ' ');
                      };
                      return words(a) != words(b) ? words(a) > words(b) : a < b;
                  });
    }
    entries_.push_back(std::move(entry));
}

bool Lexicon::has(const std::string& term, TermCategory cat) const {
    return find(term, cat) != nullptr;
}

bool Lexicon::has_term(const std::string& term) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const LexiconEntry& e) { return e.term == term; });
}

const LexiconEntry* Lexicon::find(const std::string& term, TermCategory cat) const {
    for (const auto& e : entries_)
        if (e.category == cat && e.term == term)
            return &e;
    return nullptr;
}

std::vector<const LexiconEntry*> Lexicon::in_category(TermCategory cat) const {
    std::vector<const LexiconEntry*> out;
    for (const auto& e : entries_)
        if (e.category == cat)
            out.push_back(&e);
    return out;
}

bool Lexicon::is_stone(const std::string& term) const {
    return has(term, TermCategory::StonePrecious) ||
           has(term, TermCategory::StoneSemiPrecious);
}

std::string Lexicon::base_type(const std::string& term) const {
    if (const LexiconEntry* e = find(term, TermCategory::JewelryType))
        for (const auto& [kind, target] : e->relations)
            if (kind == "base_type")
                return target;
    return term;
}

Lexicon Lexicon::parse(const std::string& json_text) {
    Lexicon lex;
    const bool blank = std::all_of(json_text.begin(), json_text.end(),
                                   [](unsigned char c) { return std::isspace(c); });
    if (blank)
        return lex;

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw LexiconParseError(std::string("lexicon is not valid JSON: ") + e.what());
    }
    if (!doc.is_array())
        throw LexiconParseError("lexicon JSON must be an array of entries");

    for (const auto& item : doc) {
        if (!item.is_object() || !item.contains("term") || !item.contains("category"))
            throw LexiconParseError("lexicon entry needs 'term' and 'category'");
        LexiconEntry e;
        e.term = item.at("term").get<std::string>();
        e.category = category_from_name(item.at("category").get<std::string>());
        e.gloss = item.value("gloss", std::string{});
        if (item.contains("relations"))
            for (const auto& rel : item.at("relations"))
                e.relations.emplace_back(rel.at("kind").get<std::string>(),
                                         rel.at("term").get<std::string>());
        lex.add(std::move(e));
    }
    return lex;
}

Lexicon Lexicon::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw LexiconParseError("cannot open lexicon file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string Lexicon::dump() const {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& e : entries_) {
        nlohmann::json item;
        item["term"] = e.term;
        item["category"] = category_name(e.category);
        item["gloss"] = e.gloss;
        auto rels = nlohmann::json::array();
        for (const auto& [kind, term] : e.relations)
            rels.push_back({{"kind", kind}, {"term", term}});
        item["relations"] = rels;
        doc.push_back(std::move(item));
    }
    return doc.dump(2);
}

namespace {

Lexicon make_builtin() {
    Lexicon lex;
    auto put = [&](const char* term, TermCategory cat, const char* gloss,
                   std::vector<std::pair<std::string, std::string>> rels = {}) {
        lex.add(LexiconEntry{term, cat, gloss, std::move(rels)});
    };

    using TC = TermCategory;

    // jewelry taxonomy
    put("necklace", TC::JewelryType, "chain or string of beads worn around the neck");
    put("ring", TC::JewelryType, "circular band worn on a finger");
    put("earrings", TC::JewelryType, "pair of ornaments worn on the ears");
    put("bracelet", TC::JewelryType, "band or chain worn around the wrist");
    put("solitaire", TC::JewelryType, "ring set with a single stone",
        {{"base_type", "ring"}});
    put("fob", TC::JewelryType, "short chain or ornament attached to a watch");
    put("locket", TC::JewelryType, "small case worn on a chain");
    put("armlet", TC::JewelryType, "band worn around the upper arm");
    put("finger ring", TC::JewelryType, "ring worn on a finger",
        {{"base_type", "ring"}});
    put("watch", TC::JewelryType, "timepiece worn on the wrist");
    put("button", TC::JewelryType, "decorative fastener");
    put("clip", TC::JewelryType, "ornament fastened by a spring grip");
    put("cufflinks", TC::JewelryType, "pair of fasteners for shirt cuffs");
    put("pendant", TC::JewelryType, "ornament hung from a chain");
    put("pin", TC::JewelryType, "ornament fastened with a pointed shaft");
    put("tie clasp", TC::JewelryType, "bar holding a tie in place");
    put("anklet", TC::JewelryType, "chain worn around the ankle");
    put("toe ring", TC::JewelryType, "ring worn on a toe", {{"base_type", "ring"}});
    put("ear ornament", TC::JewelryType, "ornament worn on the ear");
    put("hair ornament", TC::JewelryType, "ornament worn in the hair");
    put("nose ornament", TC::JewelryType, "ornament worn on the nose");

    // materials
    put("yellow gold", TC::Material, "classic gold alloy", {{"color", "yellow"}});
    put("rose gold", TC::Material, "gold alloyed with copper", {{"color", "rose"}});
    put("white gold", TC::Material, "gold alloyed with white metals", {{"color", "white"}});
    put("silver", TC::Material, "white precious metal", {{"color", "white"}});
    put("gold", TC::Material, "precious yellow metal", {{"color", "yellow"}});
    put("platinum", TC::Material, "dense silvery precious metal", {{"color", "white"}});

    // the seven precious stones
    put("pearl", TC::StonePrecious, "lustrous sphere formed within a mollusk");
    put("diamond", TC::StonePrecious, "hardest gem, brilliant and colorless");
    put("ruby", TC::StonePrecious, "red corundum", {{"color", "red"}});
    put("emerald", TC::StonePrecious, "green beryl", {{"color", "green"}});
    put("alexandrite", TC::StonePrecious, "color-changing chrysoberyl");
    put("sapphire", TC::StonePrecious, "blue corundum", {{"color", "blue"}});
    put("oriental catseye", TC::StonePrecious, "chatoyant chrysoberyl");

    // semi-precious stones
    put("amethyst", TC::StoneSemiPrecious, "violet quartz", {{"color", "purple"}});
    put("topaz", TC::StoneSemiPrecious, "silicate gem, often sky blue", {{"color", "blue"}});
    put("tourmaline", TC::StoneSemiPrecious, "boron silicate gem in many colors");
    put("aquamarine", TC::StoneSemiPrecious, "pale blue-green beryl", {{"color", "blue"}});
    put("chrysoprase", TC::StoneSemiPrecious, "apple-green chalcedony", {{"color", "green"}});
    put("peridot", TC::StoneSemiPrecious, "olive-green olivine", {{"color", "green"}});
    put("opal", TC::StoneSemiPrecious, "iridescent hydrated silica");
    put("zircon", TC::StoneSemiPrecious, "zirconium silicate gem");
    put("jade", TC::StoneSemiPrecious, "ornamental green stone", {{"color", "green"}});

    // colors
    put("yellow", TC::Color, "");
    put("white", TC::Color, "");
    put("rose", TC::Color, "");
    put("red", TC::Color, "");
    put("blue", TC::Color, "");
    put("green", TC::Color, "");
    put("purple", TC::Color, "");
    put("pink", TC::Color, "");
    put("black", TC::Color, "");

    // plain adjectives (cuts, positions, varieties)
    put("brilliant-cut", TC::Adjective, "cut with maximal facets for sparkle");
    put("central", TC::Adjective, "set at the center of the piece");
    put("sky", TC::Adjective, "pale blue variety");
    put("round", TC::Adjective, "circular outline");
    put("oval", TC::Adjective, "elliptical outline");
    put("polished", TC::Adjective, "finished to a smooth shine");
    put("engraved", TC::Adjective, "decorated with incised patterns");

    // superlatives: optional embellishments, removable without loss
    put("sustainable", TC::Superlative, "responsibly sourced");
    put("exquisite", TC::Superlative, "of rare beauty");
    put("secure", TC::Superlative, "firmly fastened");
    put("dazzling", TC::Superlative, "brilliantly bright");
    put("iris", TC::Superlative, "named collection style");
    put("elegant", TC::Superlative, "gracefully refined");
    put("beautiful", TC::Superlative, "pleasing to the eye");
    put("stunning", TC::Superlative, "strikingly impressive");
    put("radiant", TC::Superlative, "glowing brightly");
    put("luxurious", TC::Superlative, "sumptuously rich");

    // closed connective inventory
    put("in", TC::Connective, "");
    put("with", TC::Connective, "");
    put("and", TC::Connective, "");
    put("a", TC::Connective, "");
    put("adorned with", TC::Connective, "");
    put("featuring", TC::Connective, "");

    // features: complement nouns
    put("pendant", TC::Feature, "hanging ornament");
    put("push-back clasp", TC::Feature, "friction earring fastener");
    put("clasp", TC::Feature, "fastener");
    put("charm", TC::Feature, "small dangling ornament");
    put("engraving", TC::Feature, "incised decoration");

    return lex;
}

} // namespace

const Lexicon& Lexicon::builtin() {
    static const Lexicon lex = make_builtin();
    return lex;
}

void validate_record(const JewelryRecord& record, const Lexicon& lexicon) {
    if (record.jewelry_type.empty())
        throw IncompleteRecord("record has no jewelry_type");
    if (!lexicon.has(record.jewelry_type, TermCategory::JewelryType))
        throw LexiconMiss("unknown jewelry type: " + record.jewelry_type);
    if (record.materials.empty())
        throw IncompleteRecord("record has no materials");
    for (const auto& m : record.materials)
        if (!lexicon.has(m, TermCategory::Material))
            throw LexiconMiss("unknown material: " + m);
    for (const auto& s : record.stones)
        if (!lexicon.is_stone(s))
            throw LexiconMiss("unknown stone: " + s);
    for (const auto& c : record.colors)
        if (!lexicon.has(c, TermCategory::Color))
            throw LexiconMiss("unknown color: " + c);
    for (const auto& f : record.features)
        if (!lexicon.has(f, TermCategory::Feature) && !lexicon.has(f, TermCategory::Adjective))
            throw LexiconMiss("unknown feature: " + f);
    for (const auto& a : record.style_adjectives)
        if (!lexicon.has(a, TermCategory::Superlative))
            throw LexiconMiss("unknown superlative: " + a);
}

} // namespace gemcap
