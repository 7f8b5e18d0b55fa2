#include "stylodetect/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "stylodetect/util.hpp"

namespace stylo::fea {

namespace {

// Declared character classes for the three character-count features.
const std::set<char> kSpecialChars{'#', '$', '%', '&', '*', '+', '/', '<', '=', '>',
                                   '@', '[', '\\', ']', '^', '_', '{', '|', '}', '~'};
const std::set<char> kPunctuation{'.', ',', ';', ':', '!', '?'};
const std::set<uint32_t> kQuotes{0x22 /* " */, 0x201C /* left */, 0x201D /* right */,
                                 0xAB /* << */, 0xBB /* >> */};

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double s = 0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

// Population standard deviation; a single observation has spread 0.
double stdev_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    double m = mean_of(xs);
    double s = 0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size()));
}

bool has_alpha(const std::string& s) {
    for (char c : s)
        if (ascii_alpha(c)) return true;
    return false;
}

bool has_digit(const std::string& s) {
    for (char c : s)
        if (ascii_digit(c)) return true;
    return false;
}

} // namespace

// ---------------------------------------------------------------------------
// Semantic

SemanticFeatures semantic_features(const text::StructuredText& doc, const text::LexiconSet& lex) {
    double polarity_sum = 0, subjectivity_sum = 0;
    size_t matched = 0;
    doc.for_each_sentence([&](const text::Sentence& s) {
        std::vector<const text::Token*> words;
        for (const auto& t : s.tokens)
            if (t.is_word) words.push_back(&t);
        for (size_t i = 0; i < words.size(); ++i) {
            auto it = lex.sentiment.find(words[i]->folded);
            if (it == lex.sentiment.end()) continue;
            double pol = it->second.polarity;
            for (size_t back = 1; back <= 3 && back <= i; ++back) {
                if (lex.negators.count(words[i - back]->folded)) {
                    pol = -pol;
                    break;
                }
            }
            polarity_sum += pol;
            subjectivity_sum += it->second.subjectivity;
            ++matched;
        }
    });
    if (matched == 0) return {0.0, 0.0};
    return {polarity_sum / static_cast<double>(matched),
            subjectivity_sum / static_cast<double>(matched)};
}

// ---------------------------------------------------------------------------
// List lookup

ListLookupFeatures list_lookup_features(const text::StructuredText& doc, const std::string& title,
                                        const text::LexiconSet& lex) {
    if (title.empty()) throw std::invalid_argument("list_lookup_features: title must not be empty");
    ListLookupFeatures out;

    for (char c : doc.source)
        if (kSpecialChars.count(c)) out.special_char_count += 1;

    size_t words_total = 0;
    std::map<std::string, long> body_occurrences;
    doc.for_each_sentence([&](const text::Sentence& s) {
        std::vector<std::string> folded;
        for (const auto& t : s.tokens) {
            if (!t.is_word) continue;
            folded.push_back(t.folded);
            ++words_total;
            if (lex.is_stop_word(t.folded)) out.stop_word_count += 1;
            body_occurrences[t.folded] += 1;
        }
        // longest-match scan for multi-word discourse markers
        for (size_t i = 0; i < folded.size();) {
            size_t best = 0;
            for (const auto& marker : lex.discourse_markers) {
                if (marker.size() <= best || i + marker.size() > folded.size()) continue;
                bool match = true;
                for (size_t k = 0; k < marker.size(); ++k)
                    if (marker[k] != folded[i + k]) {
                        match = false;
                        break;
                    }
                if (match) best = marker.size();
            }
            if (best > 0) {
                out.discourse_marker_count += 1;
                i += best;
            } else {
                ++i;
            }
        }
    });

    // title keywords: distinct non-stopword title tokens
    std::set<std::string> keywords;
    text::StructuredText title_doc = text::structure(title);
    title_doc.for_each_token([&](const text::Token& t) {
        if (t.is_word && !lex.is_stop_word(t.folded)) keywords.insert(t.folded);
    });
    for (const auto& kw : keywords) {
        auto it = body_occurrences.find(kw);
        if (it != body_occurrences.end()) out.title_repetition_count += static_cast<double>(it->second);
    }
    out.title_repetition_relative =
        words_total == 0 ? 0.0 : out.title_repetition_count / static_cast<double>(words_total);
    return out;
}

// ---------------------------------------------------------------------------
// Document statistics

std::map<std::string, double> document_features(const text::StructuredText& doc,
                                                const text::LexiconSet& lex) {
    std::map<std::string, double> out;

    std::vector<double> words_per_par, sents_per_par, words_per_sent, uniq_per_sent, pos_per_sent;
    std::set<std::string> uniq_all;
    size_t words_total = 0, uppercase = 0, pronouns = 0;

    text::StructuredText tagged = doc;
    text::annotate_pos(tagged, lex);

    for (const auto& par : tagged.paragraphs) {
        size_t par_words = 0;
        for (const auto& s : par.sentences) {
            std::set<std::string> uniq;
            std::set<text::PosTag> tags;
            size_t sent_words = 0;
            for (const auto& t : s.tokens) {
                if (!t.is_word) continue;
                ++sent_words;
                uniq.insert(t.folded);
                uniq_all.insert(t.folded);
                tags.insert(t.pos);
                if (lex.personal_pronouns.count(t.folded)) ++pronouns;
                bool all_caps = t.surface.size() >= 2;
                for (char c : t.surface)
                    if (!ascii_alpha(c) || ascii_lower(c) == c) all_caps = false;
                if (all_caps) ++uppercase;
            }
            par_words += sent_words;
            words_per_sent.push_back(static_cast<double>(sent_words));
            uniq_per_sent.push_back(static_cast<double>(uniq.size()));
            pos_per_sent.push_back(static_cast<double>(tags.size()));
        }
        words_total += par_words;
        words_per_par.push_back(static_cast<double>(par_words));
        sents_per_par.push_back(static_cast<double>(par.sentences.size()));
    }

    out["wordsPerParagraph_mean"] = mean_of(words_per_par);
    out["wordsPerParagraph_stdev"] = stdev_of(words_per_par);
    out["sentencesPerParagraph_mean"] = mean_of(sents_per_par);
    out["sentencesPerParagraph_stdev"] = stdev_of(sents_per_par);
    out["wordsPerSentence_mean"] = mean_of(words_per_sent);
    out["wordsPerSentence_stdev"] = stdev_of(words_per_sent);
    out["uniqWordsPerSentence_mean"] = mean_of(uniq_per_sent);
    out["uniqWordsPerSentence_stdev"] = stdev_of(uniq_per_sent);
    out["words_count"] = static_cast<double>(words_total);
    out["uniqWords_count"] = static_cast<double>(uniq_all.size());
    out["uniqWords_relative"] =
        words_total == 0 ? 0.0 : static_cast<double>(uniq_all.size()) / static_cast<double>(words_total);
    out["paragraph_count"] = static_cast<double>(tagged.paragraphs.size());
    out["sentence_count"] = static_cast<double>(tagged.sentence_count());

    double punct = 0, quotes = 0;
    for (char c : doc.source)
        if (kPunctuation.count(c)) punct += 1;
    for (size_t i = 0; i < doc.source.size();)
        if (kQuotes.count(utf8_decode(doc.source, i))) quotes += 1;
    out["punctuation_count"] = punct;
    out["quotation_count"] = quotes;
    out["character_count"] = static_cast<double>(utf8_length(doc.source));
    out["uppercaseWords_relative"] =
        words_total == 0 ? 0.0 : static_cast<double>(uppercase) / static_cast<double>(words_total);
    out["personalPronoun_count"] = static_cast<double>(pronouns);
    out["personalPronoun_relative"] =
        words_total == 0 ? 0.0 : static_cast<double>(pronouns) / static_cast<double>(words_total);
    out["POSPerSentence_mean"] = mean_of(pos_per_sent);
    return out;
}

// ---------------------------------------------------------------------------
// Error-based

int multi_blank_count(const std::string& body) {
    int runs = 0;
    size_t i = 0;
    while (i < body.size()) {
        if (body[i] == ' ') {
            size_t j = i;
            while (j < body.size() && body[j] == ' ') ++j;
            if (j - i >= 2) ++runs;
            i = j;
        } else {
            ++i;
        }
    }
    return runs;
}

int RuleGrammar::error_count(const std::string& body) {
    if (trim(body).empty()) return 0;
    text::StructuredText doc = text::structure(body);
    int errors = 0;
    doc.for_each_sentence([&](const text::Sentence& s) {
        std::vector<const text::Token*> words;
        for (const auto& t : s.tokens)
            if (t.is_word) words.push_back(&t);
        for (size_t i = 0; i < words.size(); ++i) {
            const auto& tok = *words[i];
            // spelling: skip numerals and mid-sentence capitalized tokens
            bool capitalized = !tok.surface.empty() && ascii_alpha(tok.surface[0]) &&
                               ascii_lower(tok.surface[0]) != tok.surface[0];
            if (!has_digit(tok.surface) && !(capitalized && i > 0) &&
                !lex_->in_dictionary(tok.folded))
                ++errors;
            if (i > 0 && tok.folded == words[i - 1]->folded) ++errors; // doubled word
            if (i + 1 < words.size()) {
                char next0 = ascii_lower(words[i + 1]->folded.empty() ? '\0'
                                                                         : words[i + 1]->folded[0]);
                bool vowel = next0 == 'a' || next0 == 'e' || next0 == 'i' || next0 == 'o' || next0 == 'u';
                if (tok.folded == "a" && vowel) ++errors;
                if (tok.folded == "an" && ascii_alpha(next0) && !vowel) ++errors;
            }
        }
    });
    return errors;
}

ErrorFeatures error_features(const std::string& body, GrammarProvider& grammar) {
    ErrorFeatures out;
    out.grammar_error_count = static_cast<double>(grammar.error_count(body));
    out.multi_blank_count = static_cast<double>(multi_blank_count(body));
    return out;
}

// ---------------------------------------------------------------------------
// Readability

ReadabilityFeatures readability_features(const text::StructuredText& doc) {
    double words = 0, syllables = 0;
    doc.for_each_token([&](const text::Token& t) {
        if (!t.is_word) return;
        words += 1;
        // digit-only tokens have no spellable syllables; floor at one
        syllables += has_alpha(t.surface) ? text::count_syllables(t.surface) : 1;
    });
    double sentences = static_cast<double>(doc.sentence_count());
    if (words < 1 || sentences < 1)
        throw std::invalid_argument("readability needs at least one word and one sentence");
    double wps = words / sentences;
    double spw = syllables / words;
    return {206.835 - 1.015 * wps - 84.6 * spw, 0.39 * wps + 11.8 * spw - 15.59};
}

// ---------------------------------------------------------------------------
// AI feedback

int classify_feedback(const std::string& response) {
    size_t i = 0;
    while (i < response.size() && !ascii_alpha(response[i])) ++i;
    std::string lead;
    while (i < response.size() && ascii_alpha(response[i]))
        lead.push_back(ascii_lower(response[i++]));
    if (lead == "yes") return 2;
    if (lead == "no") return 0;
    return 1;
}

int ai_feedback_feature(const std::string& body, ChatProvider* chat, bool impute) {
    if (!chat) {
        if (impute) return 1;
        throw std::runtime_error("ai feedback provider not configured and imputation disabled");
    }
    try {
        return classify_feedback(chat->feedback(body));
    } catch (const std::exception&) {
        if (impute) return 1;
        throw;
    }
}

// ---------------------------------------------------------------------------
// Assembly

FeatureVector assemble(const corpus::TextSample& sample, const FeatureProviders& providers,
                       const FeatureSchema& schema, const Selection& sel) {
    FeatureSchema sub = subset(schema, sel);
    if (sub.descriptors().empty())
        throw std::invalid_argument("selection " + sel.name + " admits no features of this schema");

    try {
        text::StructuredText doc = text::structure(sample.body);
        if (!providers.lexicon) throw std::runtime_error("lexicon not configured");
        const auto& lex = *providers.lexicon;

        std::map<std::string, double> scalars;
        std::vector<double> tfidf_block, embed_block;
        FeatureVector fv;
        std::set<Category> done;

        auto ensure = [&](Category c) {
            if (done.count(c)) return;
            done.insert(c);
            switch (c) {
                case Category::perplexity: {
                    if (!providers.scorer) throw std::runtime_error("perplexity scorer not configured");
                    auto ppl = lm::perplexity_features(*providers.scorer, doc);
                    scalars["PPL_mean"] = ppl.ppl_mean;
                    scalars["PPL_max"] = ppl.ppl_max;
                    fv.provenance["perplexity"] = providers.scorer_id;
                    break;
                }
                case Category::semantic: {
                    auto sem = semantic_features(doc, lex);
                    scalars["sentiment_polarity"] = sem.polarity;
                    scalars["sentiment_subjectivity"] = sem.subjectivity;
                    break;
                }
                case Category::list_lookup: {
                    auto ll = list_lookup_features(doc, sample.topic_title, lex);
                    scalars["stopWord_count"] = ll.stop_word_count;
                    scalars["specialChar_count"] = ll.special_char_count;
                    scalars["discourseMarker_count"] = ll.discourse_marker_count;
                    scalars["titleRepetition_count"] = ll.title_repetition_count;
                    scalars["titleRepetition_relative"] = ll.title_repetition_relative;
                    break;
                }
                case Category::document: {
                    auto docf = document_features(doc, lex);
                    scalars.insert(docf.begin(), docf.end());
                    break;
                }
                case Category::error_based: {
                    if (!providers.grammar) throw std::runtime_error("grammar provider not configured");
                    auto err = error_features(sample.body, *providers.grammar);
                    scalars["grammarError_count"] = err.grammar_error_count;
                    scalars["multiBlank_count"] = err.multi_blank_count;
                    fv.provenance["error_based"] = providers.grammar->id();
                    break;
                }
                case Category::readability: {
                    auto read = readability_features(doc);
                    scalars["fleschReadingEase"] = read.flesch_reading_ease;
                    scalars["fleschKincaidGradeLevel"] = read.flesch_kincaid_grade_level;
                    break;
                }
                case Category::ai_feedback: {
                    scalars["AIFeedback"] = static_cast<double>(
                        ai_feedback_feature(sample.body, providers.chat, providers.impute_ai_feedback));
                    fv.provenance["ai_feedback"] =
                        providers.chat ? providers.chat->id() : "imputed";
                    break;
                }
                case Category::text_vector: {
                    if (!providers.tfidf) throw std::runtime_error("tf-idf model not configured");
                    if (!providers.embedder) throw std::runtime_error("sentence embedder not configured");
                    tfidf_block = providers.tfidf->transform(doc);
                    auto emb = vec::embed_sentences(*providers.embedder, doc);
                    embed_block = emb.doc_mean;
                    scalars["sentenceVector_dist"] = emb.mean_distance;
                    fv.provenance["text_vector"] = providers.embedder->id();
                    break;
                }
            }
        };

        for (const auto& d : sub.descriptors()) {
            ensure(d.category);
            if (d.name == "tfidf") {
                if (tfidf_block.size() != d.arity)
                    throw std::runtime_error("tf-idf block has " + std::to_string(tfidf_block.size()) +
                                             " values, schema expects " + std::to_string(d.arity));
                fv.values.insert(fv.values.end(), tfidf_block.begin(), tfidf_block.end());
            } else if (d.name == "sentenceVector") {
                if (embed_block.size() != d.arity)
                    throw std::runtime_error("sentence vector has " + std::to_string(embed_block.size()) +
                                             " dimensions, schema expects " + std::to_string(d.arity));
                fv.values.insert(fv.values.end(), embed_block.begin(), embed_block.end());
            } else {
                auto it = scalars.find(d.name);
                if (it == scalars.end())
                    throw std::runtime_error("no computation produced feature " + d.name);
                fv.values.push_back(it->second);
            }
        }
        fv.names = sub.column_names();

        auto violations = range_violations(fv);
        if (!violations.empty()) throw std::runtime_error("range violation: " + violations.front());
        return fv;
    } catch (const std::exception& e) {
        throw std::runtime_error("featurize failed for \"" + sample.id + "\": " + e.what());
    }
}

} // namespace stylo::fea
