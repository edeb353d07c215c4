#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "structlang/corpus.hpp"

using namespace structlang;

namespace {

CorpusRecord sample_record() {
    CorpusRecord rec;
    rec.sequence = split_tokens("( ( ) ( ) )");
    rec.language_tag = LanguageTag::dyck1;
    rec.seed = SeedSpec{11, 3};
    rec.params_digest = "0123456789abcdef";
    rec.metadata["depth"] = "2";
    return rec;
}

}  // namespace

TEST_CASE("token helpers") {
    CHECK(join_tokens(split_tokens("a b  c")) == "a b c");
    CHECK(split_tokens("").tokens.empty());
    CHECK(split_tokens("  \t ").tokens.empty());
    CHECK(tokens_well_formed(split_tokens("x y")));
    TokenSequence bad;
    bad.tokens = {"ok", ""};
    CHECK_FALSE(tokens_well_formed(bad));
    bad.tokens = {"with space"};
    CHECK_FALSE(tokens_well_formed(bad));
}

TEST_CASE("language tags round-trip") {
    for (LanguageTag tag : {LanguageTag::dyck1, LanguageTag::ksd, LanguageTag::mpstruct,
                            LanguageTag::mpstruct_ablated, LanguageTag::core,
                            LanguageTag::generic_ksd, LanguageTag::perturbed}) {
        CHECK(language_tag_from_string(to_string(tag)) == tag);
    }
    CHECK_THROWS_AS(language_tag_from_string("klingon"), std::invalid_argument);
}

TEST_CASE("fnv1a64 known answers") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("params digest is canonical and sensitive") {
    nlohmann::json a;
    a["alpha"] = 1;
    a["beta"] = "two";
    a["gamma"] = 0.5;
    nlohmann::json b;
    b["gamma"] = 0.5;
    b["alpha"] = 1;
    b["beta"] = "two";
    CHECK(params_digest(a) == params_digest(b));
    CHECK(params_digest(a) == "0dfb82db07383474");
    CHECK(params_digest(a).size() == 16);
    b["alpha"] = 2;
    CHECK(params_digest(a) != params_digest(b));
    // The generator name is folded in under "prng"; that key is reserved so a
    // caller-supplied value cannot silently collide with it.
    nlohmann::json c = a;
    c["prng"] = "something-else";
    CHECK_THROWS_AS(params_digest(c), std::invalid_argument);
}

TEST_CASE("plain format round-trips surfaces") {
    std::vector<CorpusRecord> corpus = {sample_record(), sample_record()};
    corpus[1].sequence = split_tokens("(1 )1");
    std::string text = serialize_corpus(corpus, CorpusFormat::plain);
    CHECK(text == "( ( ) ( ) )\n(1 )1\n");
    auto back = parse_corpus(text, CorpusFormat::plain);
    REQUIRE(back.size() == 2);
    CHECK(back[0].sequence == corpus[0].sequence);
    CHECK(back[1].sequence == corpus[1].sequence);
}

TEST_CASE("jsonl format round-trips records") {
    std::vector<CorpusRecord> corpus = {sample_record()};
    std::string text = serialize_corpus(corpus, CorpusFormat::jsonl);
    auto back = parse_corpus(text, CorpusFormat::jsonl);
    REQUIRE(back.size() == 1);
    CHECK(back[0] == corpus[0]);

    std::istringstream in(text);
    auto back2 = parse_corpus(in, CorpusFormat::jsonl);
    REQUIRE(back2.size() == 1);
    CHECK(back2[0] == corpus[0]);
}

TEST_CASE("jsonl parse errors name the line") {
    std::string good = serialize_corpus({sample_record()}, CorpusFormat::jsonl);
    std::string text = good + "{not json}\n";
    try {
        parse_corpus(text, CorpusFormat::jsonl);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_corpus(std::string("{\"language_tag\":\"dyck1\"}\n"),
                                 CorpusFormat::jsonl),
                    parse_error);
    CHECK_THROWS_AS(
        parse_corpus(std::string("{\"tokens\":[\"a b\"],\"language_tag\":\"dyck1\"}\n"),
                     CorpusFormat::jsonl),
        parse_error);
    CHECK_THROWS_AS(parse_corpus(std::string("{\"tokens\":[\"a\"]}\n"), CorpusFormat::jsonl),
                    parse_error);
    CHECK_THROWS_AS(
        parse_corpus(
            std::string(
                "{\"tokens\":[\"a\"],\"language_tag\":\"dyck1\",\"metadata\":{\"k\":1}}\n"),
            CorpusFormat::jsonl),
        parse_error);
}

TEST_CASE("format names parse") {
    CHECK(corpus_format_from_string("plain") == CorpusFormat::plain);
    CHECK(corpus_format_from_string("jsonl") == CorpusFormat::jsonl);
    CHECK_THROWS_AS(corpus_format_from_string("xml"), std::invalid_argument);
}
