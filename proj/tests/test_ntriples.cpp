#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "energykg/error.hpp"
#include "energykg/ntriples.hpp"
#include "support/generators.hpp"

using namespace energykg;

namespace {

bool graphs_equal(const Graph& a, const Graph& b) {
  return serialize_ntriples(a) == serialize_ntriples(b);
}

}  // namespace

TEST_CASE("empty graph round trips") {
  const Graph g;
  const std::string text = serialize_ntriples(g);
  CHECK(text.empty());
  const Graph back = parse_ntriples(text);
  CHECK(back.empty());
}

TEST_CASE("single triple round trips") {
  Graph g;
  g.insert(Triple{Iri("http://x.example/s"), Iri("http://x.example/p"),
                  Term(PlainLiteral{"hello \"world\"\n\t\\"})});
  const Graph back = parse_ntriples(serialize_ntriples(g));
  CHECK(graphs_equal(g, back));
  CHECK(back.size() == 1);
}

TEST_CASE("randomized graphs round trip as sets") {
  testgen::Rng rng(3);
  for (int iter = 0; iter < 50; ++iter) {
    const Graph g = testgen::random_nasty_graph(rng, 1000);
    const Graph back = parse_ntriples(serialize_ntriples(g));
    REQUIRE(back.size() == g.size());
    CHECK(graphs_equal(g, back));
  }
}

TEST_CASE("serialization is canonical") {
  // same set, different insertion order -> identical bytes
  testgen::Rng rng(5);
  const auto pool = testgen::random_pool(rng);
  std::vector<Triple> triples;
  for (int i = 0; i < 200; ++i) triples.push_back(testgen::random_triple(rng, pool));
  Graph a, b;
  for (const auto& t : triples) a.insert(t);
  for (auto it = triples.rbegin(); it != triples.rend(); ++it) b.insert(*it);
  CHECK(serialize_ntriples(a) == serialize_ntriples(b));
}

TEST_CASE("parser reports line numbers and rejects blank nodes") {
  CHECK_THROWS_WITH_AS((void)parse_ntriples("<http://a.example/s> <http://a.example/p> .\n",
                                            "doc.nt"),
                       doctest::Contains("doc.nt:1"), Error);
  const std::string bad_second =
      "<http://a.example/s> <http://a.example/p> \"ok\" .\n"
      "_:b0 <http://a.example/p> \"x\" .\n";
  CHECK_THROWS_WITH_AS((void)parse_ntriples(bad_second, "doc.nt"), doctest::Contains("doc.nt:2"),
                       Error);
  CHECK_THROWS_WITH_AS(
      (void)parse_ntriples("<http://a.example/s> <http://a.example/p> _:b1 .\n", "doc.nt"),
      doctest::Contains("blank"), Error);
  CHECK_THROWS_AS(
      (void)parse_ntriples("<http://a.example/s> <http://a.example/p> \"x\"@en .\n"),
      Error);
  CHECK_THROWS_AS((void)parse_ntriples("<http://a.example/s> <p with space> \"x\" .\n"), Error);
}

TEST_CASE("parser accepts comments, blank lines and \\u escapes") {
  const std::string text =
      "# leading comment\n"
      "\n"
      "<http://a.example/s> <http://a.example/p> \"snow\\u2603man\" .\n"
      "  <http://a.example/s2> <http://a.example/p> \"A\\U00000042C\" . \n";
  const Graph g = parse_ntriples(text);
  CHECK(g.size() == 2);
  CHECK(g.contains(Triple{Iri("http://a.example/s"), Iri("http://a.example/p"),
                          Term(PlainLiteral{"snow☃man"})}));
  CHECK(g.contains(Triple{Iri("http://a.example/s2"), Iri("http://a.example/p"),
                          Term(PlainLiteral{"ABC"})}));
}

TEST_CASE("typed literal invariants carry line numbers through parsing") {
  const std::string text =
      "<http://a.example/s> <http://a.example/p> "
      "\"oops\"^^<http://www.w3.org/2001/XMLSchema#double> .\n";
  CHECK_THROWS_WITH_AS((void)parse_ntriples(text, "doc.nt"), doctest::Contains("doc.nt:1"), Error);
}

TEST_CASE("turtle output compacts with registry prefixes") {
  const TermRegistry reg = TermRegistry::defaults();
  Graph g;
  g.insert(Triple{Iri("http://example.org/energykg/DE_KN_COSSMIC"),
                  Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type"),
                  Term(Iri("https://w3id.org/seas/ElectricPowerDistributionNetwork"))});
  g.insert(Triple{Iri("http://example.org/energykg/DE_KN_COSSMIC"),
                  Iri("https://w3id.org/seas/powers"),
                  Term(Iri("http://example.org/energykg/DE_KN_industrial1"))});
  g.insert(Triple{Iri("http://other.example/x"), Iri("https://w3id.org/seas/evaluation"),
                  double_literal(7.2)});
  const std::string ttl = serialize_turtle(g, reg);
  CHECK(ttl.find("@prefix seas: <https://w3id.org/seas/> .") != std::string::npos);
  CHECK(ttl.find(":DE_KN_COSSMIC a seas:ElectricPowerDistributionNetwork") != std::string::npos);
  CHECK(ttl.find("seas:powers :DE_KN_industrial1") != std::string::npos);
  CHECK(ttl.find("<http://other.example/x>") != std::string::npos);  // no prefix applies
  CHECK(ttl.find("\"7.2\"^^xsd:double") != std::string::npos);
  // only used prefixes are declared
  CHECK(ttl.find("@prefix sosa:") == std::string::npos);
}
