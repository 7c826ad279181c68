// SPDX-License-Identifier: Apache-2.0
//
// Prompt template bodies, stored verbatim as versioned text assets.
// The unit tests diff these against tests/golden/templates/.

#include "lemjudge/schema.hpp"

namespace lemjudge::schema {

namespace {

constexpr std::string_view kTwoSectionBody = R"TMPL(Lemma: {lemma}
Statement: {statement}

Please analyze step by step whether the lemma is useful for proving or disproving the given statement. You should perform two sequential checks:

**Step 1: Precondition Check**
First, analyze whether the lemma's preconditions are satisfied in the given statement. After your reasoning, provide your answer within boxed{} as either boxed{True} (preconditions are satisfied) or boxed{False} (preconditions are not satisfied).

**Step 2: Conclusion Check**
Next, analyze whether the lemma's conclusion is helpful for proving or disproving the given statement. After your reasoning, provide your answer within boxed{} as either boxed{True} (conclusion is helpful) or boxed{False} (conclusion is not helpful).


Please use the same section titles as above (i.e., **Step 1: Precondition Check** and **Step 2: Conclusion Check**) to start the two checks respectively and STRICTLY follow the following format:
- First, provide your reasoning for the precondition check
- Then output boxed{True} or boxed{False} for the precondition check
- Then provide your reasoning for the conclusion check
- Finally output boxed{True} or boxed{False} for the conclusion check
)TMPL";

constexpr std::string_view kVanillaBody = R"TMPL(Lemma: {lemma}
Statement: {statement}

Please reason step by step about whether the above lemma is useful for proving or disproving its following statement, and then put your final answer (i.e., True or False) within \boxed{}.
)TMPL";

constexpr std::string_view kTwoSectionOnetimeBody = R"TMPL(Lemma: {lemma}
Statement: {statement}

Please think step by step whether the lemma is useful for proving or disproving the given statement. Specifically, please 1) check whether the lemma's preconditions are satisfied in the given statement, and 2) check whether the lemma's conclusion is helpful for proving the given statement. Then put your final answers for precondition check and conclusion check, i.e., True or False for each check, within boxed{} (For example, boxed{True, False} means the lemma's preconditions are satisfied but its conclusion is not helpful for proving the given statement).
)TMPL";

constexpr std::string_view kPerturbationGenBody = R"TMPL(Based on the given statement and its proof, could you help me perturb the statement with the minimal edits so that one certain precondition of some lemma used in the proof is no longer satisfied? If the perturbation is not possible, please output suitability: False. Otherwise, return suitability: True, and then extract the affected lemma in the proof, generate the perturbed statement, and the rationale of the perturbation.

Critical Requirements:
1. MATHEMATICAL COHERENCE: The perturbed statement must be mathematically well-defined and meaningful. Do not create statements that are conceptually impossible or nonsensical (e.g., "subgroups of semigroups").

2. GENUINE INAPPLICABILITY: The chosen lemma must be fundamentally unusable in ANY reasonable proof approach for the perturbed statement. Avoid superficial changes where:
   - The lemma applies to a subset/restriction of the new domain
   - The lemma can be used indirectly through standard correspondences
   - The statement can be reduced back to the lemma's domain
   
3. VERIFICATION TEST: Before finalizing, ask: "Could the chosen lemma still contribute meaningfully to proving or disproving the perturbed statement through any mathematical pathway?" If yes, the perturbation is ineffective.

Rules:
- Copy the OriginalStatement verbatim except for that one span.
- Do NOT strengthen assumptions, introduce unrelated concepts/symbols, or make changes that render the statement trivial.
- Prefer the simplest change that creates a fundamental barrier to lemma applicability.
- The perturbation should target the lemma's core assumptions or domain in a way that cannot be circumvented.

Ineffective Perturbation Patterns to Avoid:
- Domain changes where standard correspondences exist (e.g., ℝ exponential → ℂ exponential when differentiating w.r.t. real variables)
- Structure downgrades that still allow the target concept (e.g., group → semigroup but keeping "subgroup" terminology)
- Changes that only affect surface terminology but not mathematical substance

Return ONLY this schema:
Suitability: {bool}
AffectedLemma: {lemma-content}
OriginalStatement: {original statement}
PerturbedStatement: {perturbed statement}
Rationale: {rationale explaining why the lemma becomes fundamentally inapplicable, not just surface-level different}

Now Process:

Statement: {statement}
Proof: {proof}
)TMPL";

constexpr std::string_view kPerturbationValidateBody = R"TMPL(You are evaluating the quality of a mathematical statement perturbation. Your task is to determine if the perturbation effectively breaks the chosen lemma's applicability.

Given Perturbation Data:
Lemma: {lemma}
Original Statement: {statement}
Perturbed Statement: {perturbed statement}
Rationale: {rationale}

Evaluation Criteria (ALL must pass):

1. MATHEMATICAL COHERENCE CHECK:
   - Is the perturbed statement mathematically well-defined?
   - Are all mathematical concepts used consistently and meaningfully?
   - Do the mathematical objects and relations make sense together?
   
   Common failures:
   - Mixing incompatible concepts (e.g., "subgroups of semigroups")
   - Ill-defined operations or structures
   - Conceptual contradictions

2. LEMMA INAPPLICABILITY VERIFICATION:
   Systematically check if the lemma could still be used via:
   
   a) DIRECT APPLICATION:
      - Can the lemma's hypotheses still be satisfied in the new context?
      
   b) RESTRICTION/SUBSET APPLICATION:
      - Does the lemma apply to relevant subsets of the new domain?
      - Can we restrict to cases where the lemma's conditions hold?
      
   c) CORRESPONDENCE/ISOMORPHISM:
      - Are there standard mathematical correspondences between the old and new domains?
      - Can we map the problem back to where the lemma applies?
      
   d) INDIRECT/FOUNDATIONAL USE:
      - Could the lemma be used in proving prerequisite results?
      - Is the lemma foundational to the theory needed for the perturbed statement?
      - Could it be applied to finite quotients, local analysis, etc.?
      
   e) ANALOGOUS RESULTS:
      - Are there direct analogs of the lemma in the new domain?
      - Would the original lemma be a key step in proving such analogs?

3. FAILURE PATTERN DETECTION:
   Check for these known ineffective patterns:
   
   - SUPERFICIAL DOMAIN CHANGES: Changes that look different but preserve mathematical substance
   - TERMINOLOGY SWAPS: Changing labels without affecting underlying mathematics
   - TRIVIAL GENERALIZATIONS: Moving to broader categories where restrictions still apply
   - INCOMPLETE DOMAIN SHIFTS: Changing some but not all relevant aspects of the domain

4. PROOF PATHWAY ANALYSIS:
   Consider: "In any reasonable attempt to prove or disprove the perturbed statement, could the given lemma contribute meaningfully to the argument?"
   
   If YES to any pathway → INEFFECTIVE perturbation
   If NO to all pathways → EFFECTIVE perturbation

Return your evaluation in this format:

EFFECTIVENESS: [BOOLEAN]
RATIONALE: [Explanation of why the perturbation is effective or ineffective]

Now evaluate the given perturbation:
)TMPL";

}  // namespace

std::string_view template_body(TemplateId id) {
    switch (id) {
        case TemplateId::TwoSection: return kTwoSectionBody;
        case TemplateId::Vanilla: return kVanillaBody;
        case TemplateId::TwoSectionOnetime: return kTwoSectionOnetimeBody;
        case TemplateId::PerturbationGen: return kPerturbationGenBody;
        case TemplateId::PerturbationValidate: return kPerturbationValidateBody;
    }
    return {};
}

}  // namespace lemjudge::schema
