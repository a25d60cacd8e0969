#include "negtax/prompts.hpp"

#include "negtax/error.hpp"

namespace negtax::prompts {

const std::string_view kLambdaProofSystem = R"(1. You are a Montagovian semanticist working in a typed λ-calculus framework.
2. For each input query, follow the next four steps:
   1. LEXICON: List every predicate and quantifier as a λ-term with an explicit Church type annotation.
   2. SEMANTIC INVENTORY: Output two comma-separated lists:
      - Predicates: []
      - Quantifiers: [∃, ∀]
   3. NEGATION ANALYSIS: For each predicate, indicate whether it matches one of the following categories:
      - Sentential (e.g. no, not, none, never, cannot)
      - Exclusionary (e.g. besides, except, but)
      - Affixal (e.g. bound morphemes im-, in-, un-, -less, etc.)
      - Implicit (e.g. verbs such as deny, refuse, avoid, fail)
   4. FINAL FORMULA: Present the fully reduced λ-term for S, or an equivalent first- or higher-order logic formula, enclosed in a fenced code block.
3. Respond in JSON format.
4. Example:
   Query: What organisms besides cyanobacteria perform anoxygenic photosynthesis?
   LEXICON:
   organism: λx:e. Organism(x),
   cyanobacteria: λx. Cyanobacteria(x),
   perform_anoxygenic_photosynthesis: λx. PerformAnoxygenicPhotosynthesis(x),
   besides: λP Q x. Q(x) ∧ ¬P(x)
   SEMANTIC INVENTORY: Predicates: [Organism, Cyanobacteria, PerformAnoxygenicPhotosynthesis], Quantifiers: [∃]
   NEGATION ANALYSIS: Sentential: [], Exclusionary: [besides], Affixal: [], Implicit: []
   FINAL FORMULA:
   λx:e. Organism(x) ∧ PerformAnoxygenicPhotosynthesis(x) ∧ ¬Cyanobacteria(x))";

namespace {

constexpr std::string_view kProofKeys =
    "\n\nUse these JSON keys: \"lexicon\" (list of {\"symbol\", \"lambda_term\", \"type\"}), "
    "\"predicates\" (list), \"quantifiers\" (list of \"∃\"/\"∀\"), "
    "\"negation_analysis\" (object with lists \"sentential\", \"exclusionary\", \"affixal\", \"implicit\"), "
    "\"final_formula\" (string).";

constexpr std::string_view kSystemIntro = "You are a system that receives a document. I want you to follow the next four steps:";

constexpr std::string_view kSententialStep1 =
    "1. Generate a search query that contains exactly one negation word ('no', 'not', or 'none').\n"
    "   It should not be accompanied by a quantifier.\n"
    "   The query must be well-defined and have a finite, verifiable answer even outside the document. "
    "Avoid queries that could have an infinite, unbounded or exhaustive number of answers.\n"
    "   Also, avoid queries that have the answer 'yes' or 'no'.\n"
    "   The query must be specific, and sound like something someone would type into a search engine.";

constexpr std::string_view kSententialStep2 =
    "2. Extract a short retrieval-style passage that contains exactly one negation word ('no', 'not', or 'none').\n"
    "   - If the passage does not contain a negation, add exactly one negation word ('no', 'not', or 'none').";

constexpr std::string_view kExceptorStep1 =
    "1. Generate a search query that contains exactly one exclusionary word such as ('others', 'besides', "
    "'but', or 'except'). The query must be well-defined and have a finite, verifiable answer even outside "
    "the document. Avoid queries that could have an infinite or unbounded number of answers. The query must "
    "be specific, and sound like something someone would type into a search engine.";

constexpr std::string_view kExceptorStep2 =
    "2. Extract a short retrieval-style passage that answers the query. Make sure the passage does not "
    "contain an exclusionary word such as ('others', 'besides', 'but', or 'except'). Make sure the passage "
    "also contains the excluded part from the query.";

constexpr std::string_view kAffixalStep1 =
    "1. Generate a search query that contains exactly one affixal negation such as ('un-', 'in-', 'im-', "
    "'il-', 'ir-', 'dis-', 'non-', 'mis-', 'ill-'). An affixal negation adds a prefix or suffix to reverse "
    "the meaning of a word. The query should not contain any other negation. The query must be well-defined "
    "and have a finite, verifiable answer even outside the document. Avoid queries that could have an "
    "infinite or unbounded number of answers. The query must be specific, and sound like something someone "
    "would type into a search engine.";

constexpr std::string_view kAffixalStep2 =
    "2. Extract a short retrieval-style passage that answers the query.\n"
    "   - In answering the query, the passage must contain exactly the same affixal negation as in the query.\n"
    "   - If the passage does not contain an affixal word, add exactly the same one as in the query. "
    "The passage should not contain any other negation.";

constexpr std::string_view kImplicitStep1 =
    "1. Generate a search query that contains exactly one implicit negation. An implicit negation is one "
    "that does not contain a negation operator. The word itself has negative semantics. Examples are "
    "('avoid', 'refuse', 'deny', 'ignore'). It does not include affixal negations. The query should not "
    "contain any other negation. The query must be well-defined and have a finite, verifiable answer even "
    "outside the document. Avoid queries that could have an infinite or unbounded number of answers. The "
    "query must be specific, and sound like something someone would type into a search engine.";

constexpr std::string_view kImplicitStep2 =
    "2. Extract a short retrieval-style passage that answers the query.\n"
    "   - In answering the query, the passage must contain exactly the same implicit negation as in the query.\n"
    "   - If the passage does not contain the implicit negation, add it yourself. "
    "The passage should not contain any other negation.";

constexpr std::string_view kNegationTail =
    "3. Generate the positive version of the search query by removing the negation.\n"
    "4. Generate the positive version of the passage by removing the negation. Keep the other words intact.\n"
    "5. Respond in JSON format.";

constexpr std::string_view kPairKeys =
    "\n\nUse the JSON keys \"query\", \"passage\", \"positive_query\" and \"positive_passage\".";

constexpr std::string_view kContrastingHead =
    "You are a system that receives a document. I want you to follow the next four steps.\n\n"
    "Given the following definitions of types of antonyms:\n"
    "- Polar antonyms: Words with absolute, direct opposite meaning with no other words between them.\n"
    "- Mid antonyms: Words differing slightly, not completely opposed.\n"
    "- Intermediate antonyms: Words with absolute, direct opposite meanings, with mid antonyms between them.\n\n";

constexpr std::string_view kContrastingSteps =
    " that match this document. Name them word1 and word2. Avoid antonyms that have a prefix.\n\n"
    "1. Generate a search query that contains word1. The query must be well-defined and have a finite, "
    "verifiable answer even outside the document. Avoid queries that could have an infinite or unbounded "
    "number of answers. The query must be specific and sound like something someone would type into a "
    "search engine.\n"
    "2. Extract a short retrieval-style passage that answers the query and must contain word1.\n"
    "3. Generate the positive version of the search query by switching word1 with word2.\n"
    "4. Generate the positive version of the passage by switching word1 with word2.\n\n"
    "Respond in JSON format.";

constexpr std::string_view kContrastingKeys =
    "\n\nUse the JSON keys \"word1\", \"word2\", \"query\", \"passage\", \"positive_query\" and "
    "\"positive_passage\".";

constexpr std::string_view kQuantifierPrompt =
    "You are a system that receives a document. I want you to follow the next four steps. Generate one "
    "query. Then, re-write it in the following styles. Make sure all queries have exactly the same content:\n"
    "1. The first search query must use exactly one universal quantifier (∀).\n"
    "2. The second search query must use exactly one existential quantifier (∃), followed by a negation "
    "inside its scope (∃x ¬P(x)). Do not use the word 'false'.\n"
    "3. The third search query must use exactly one negation, followed by an existential quantifier (∃) "
    "(¬∃x P(x)). Do not use the word 'false'\n"
    "4. The fourth search query must use exactly one existential quantifier (∃), such as \"some\". All "
    "queries must be well-defined and have a finite, verifiable answer. Avoid queries that could have an "
    "infinite or unbounded number of answers. The queries must be specific, and sound like something "
    "someone would type into a search engine. Do not use any symbols.Extract a short retrieval-style "
    "passage that answers the first query. Then, re-write it in the following styles:\n"
    "5. The first passage must contain exactly one universal quantifier (∀).\n"
    "6. The second passage must contain exactly one existential quantifier (∃), followed by a negation "
    "inside its scope (∃x ¬P(x)). Do not use the word 'false'.\n"
    "7. The third passage must contain exactly one negation, followed by an existential quantifier (∃) "
    "(¬∃x P(x)).\n"
    "8. The fourth passage must contain exactly one existential quantifier (∃), such as 'some'.\n"
    "9. \"Respond in JSON format.\"";

constexpr std::string_view kQuantifierKeys =
    "\n\nUse the JSON keys \"queries\" (the four queries in the order above) and \"passages\" "
    "(the four passages in the order above).";

std::string with_document(std::string_view document) {
  return "Document:\n" + std::string(document);
}

}  // namespace

oracle::Prompt lambda_proof(std::string_view text) {
  return {std::string(kLambdaProofSystem) + std::string(kProofKeys), "Query: " + std::string(text)};
}

oracle::Prompt topics(std::size_t n, std::string_view avoid_csv) {
  std::string user = "Generate " + std::to_string(n) +
                     " distinct topics of general knowledge. Each topic should be a short noun phrase that "
                     "most people are familiar with.";
  if (!avoid_csv.empty()) user += " Do not repeat any of these topics: " + std::string(avoid_csv) + ".";
  user += "\nRespond in JSON format with the key \"topics\" holding a list of strings.";
  return {"", std::move(user)};
}

oracle::Prompt page_title(std::string_view topic, std::string_view rejected_title) {
  std::string user = "Return the exact title of one English Wikipedia page about the topic \"" +
                     std::string(topic) + "\".";
  if (!rejected_title.empty())
    user += " The title \"" + std::string(rejected_title) + "\" does not exist; give a different, existing page.";
  user += "\nRespond in JSON format with the key \"title\".";
  return {"", std::move(user)};
}

std::string_view contrasting_kind(NegationLabel label) {
  // the prompt's "polar" means no gradation, its "intermediate" means gradable
  switch (label) {
    case NegationLabel::ImmediateAntonym: return "polar";
    case NegationLabel::PolarAntonym: return "intermediate";
    case NegationLabel::MidAntonym: return "mid";
    default: throw Error(Errc::Precondition, "not a contrasting label: " + std::string(to_string(label)));
  }
}

std::string_view generation_schema(NegationLabel label) {
  switch (label) {
    case NegationLabel::Sentential:
    case NegationLabel::Exceptor:
    case NegationLabel::Affixal:
    case NegationLabel::Implicit: return "negation_pair";
    case NegationLabel::Contradiction:
    case NegationLabel::Contrary:
    case NegationLabel::Subcontradiction: return "quantifier_set";
    case NegationLabel::ImmediateAntonym:
    case NegationLabel::PolarAntonym:
    case NegationLabel::MidAntonym: return "contrasting_pair";
    case NegationLabel::Other: break;
  }
  throw Error(Errc::Precondition, "no generation prompt for label 'other'");
}

oracle::Prompt generation(NegationLabel label, std::string_view document) {
  auto steps = [&](std::string_view s1, std::string_view s2) {
    return std::string(kSystemIntro) + "\n" + std::string(s1) + "\n" + std::string(s2) + "\n" +
           std::string(kNegationTail) + std::string(kPairKeys);
  };
  switch (label) {
    case NegationLabel::Sentential: return {steps(kSententialStep1, kSententialStep2), with_document(document)};
    case NegationLabel::Exceptor: return {steps(kExceptorStep1, kExceptorStep2), with_document(document)};
    case NegationLabel::Affixal: return {steps(kAffixalStep1, kAffixalStep2), with_document(document)};
    case NegationLabel::Implicit: return {steps(kImplicitStep1, kImplicitStep2), with_document(document)};
    case NegationLabel::Contradiction:
    case NegationLabel::Contrary:
    case NegationLabel::Subcontradiction:
      return {std::string(kQuantifierPrompt) + std::string(kQuantifierKeys), with_document(document)};
    case NegationLabel::ImmediateAntonym:
    case NegationLabel::PolarAntonym:
    case NegationLabel::MidAntonym:
      return {std::string(kContrastingHead) + "Pick a pair of " + std::string(contrasting_kind(label)) +
                  " antonyms" + std::string(kContrastingSteps) + std::string(kContrastingKeys),
              with_document(document)};
    case NegationLabel::Other: break;
  }
  throw Error(Errc::Precondition, "no generation prompt for label 'other'");
}

oracle::Prompt answer(std::string_view query, std::string_view document) {
  return {"You are a system that receives a document and a search query. Extract or write a short "
          "retrieval-style passage, grounded in the document, that answers the query.\n"
          "Respond in JSON format with the key \"passage\".",
          with_document(document) + "\n\nQuery: " + std::string(query)};
}

oracle::Prompt relevance(std::string_view query, std::string_view passage) {
  return {"You judge search results. Decide whether the passage is highly relevant to the query, that is, "
          "whether it directly answers the query.\n"
          "Respond in JSON format with the key \"relevant\" set to true or false.",
          "Query: " + std::string(query) + "\n\nPassage: " + std::string(passage)};
}

}  // namespace negtax::prompts
