#pragma once

#include <string>
#include <string_view>

#include "negtax/oracle.hpp"
#include "negtax/taxonomy.hpp"

namespace negtax::prompts {

/// System prompt for typed lambda-calculus proofs.
extern const std::string_view kLambdaProofSystem;

oracle::Prompt lambda_proof(std::string_view text);

oracle::Prompt topics(std::size_t n, std::string_view avoid_csv);
oracle::Prompt page_title(std::string_view topic, std::string_view rejected_title);

/// Generation prompt for a leaf label given the grounding document.
/// Contradiction, Contrary and Subcontradiction share the quantifier prompt.
/// Throws Errc::Precondition for Other.
oracle::Prompt generation(NegationLabel label, std::string_view document);

/// Schema id the generation prompt's answer must satisfy.
std::string_view generation_schema(NegationLabel label);

/// Free-mode counterpart document: a passage answering q2.
oracle::Prompt answer(std::string_view query, std::string_view document);

oracle::Prompt relevance(std::string_view query, std::string_view passage);

/// Antonym kind the contrasting prompt asks for, in the prompt's own
/// vocabulary.
std::string_view contrasting_kind(NegationLabel label);

}  // namespace negtax::prompts
