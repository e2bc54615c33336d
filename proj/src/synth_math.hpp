// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "corpus.hpp"

namespace corpusforge {

/// Exact fraction in lowest terms with a positive denominator. Arithmetic
/// throws Error(InvalidArgument) on overflow or division by zero.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t value) : num_(value) {}  // NOLINT(google-explicit-constructor)
    Rational(std::int64_t num, std::int64_t den);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    bool is_integer() const noexcept { return den_ == 1; }

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    Rational operator-() const;
    bool operator==(const Rational&) const = default;

    /// "7", "-3", "5/6", "-1/2".
    std::string to_string() const;
    /// Inverse of to_string; throws Error(Format).
    static Rational parse(std::string_view text);

private:
    static Rational from_wide(__int128 num, __int128 den);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

enum class MathFamily { Arithmetic, Fraction, LinearEquation, WordProblem };
enum class MathOp { Addition, Subtraction, Multiplication, Division };

std::string to_string(MathFamily f);
MathFamily parse_math_family(std::string_view s);
std::string to_string(MathOp op);

struct MathProblemRecord {
    std::string problem_text;
    std::string solution_text;
    Rational answer;
    MathFamily family = MathFamily::Arithmetic;
    std::set<MathOp> operations;
    std::string template_id;
    std::uint64_t seed = 0;
    /// Structured parameters the problem was built from; the verifier
    /// re-derives the answer from these alone.
    nlohmann::json params;
    /// Descriptive header prepended by postprocess_headers, or empty.
    std::string header;
};

nlohmann::ordered_json record_to_json(const MathProblemRecord& r);
MathProblemRecord record_from_json(const nlohmann::json& j);

struct IntRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

struct GeneratorConfig {
    std::uint64_t seed = 0;
    std::map<MathFamily, std::uint64_t> counts;
    IntRange arithmetic_operand{0, 999};
    IntRange fraction_numerator{1, 9};
    IntRange fraction_denominator{2, 12};
    IntRange linear_x{-20, 20};
    IntRange linear_a{-9, 9};
    IntRange linear_b{-50, 50};
    IntRange word_quantity{1, 60};
    /// Template id -> non-negative integer weight; unlisted templates weigh 1.
    std::map<std::string, std::uint64_t> template_weights;
    bool headers = true;

    /// Throws Error(Config) on empty ranges or unknown template ids.
    void validate() const;
    std::uint64_t total_count() const;
};

/// Parses the JSON config file format (see README); throws Error(Config).
GeneratorConfig parse_generator_config(const nlohmann::json& j);

/// Every template id per family, in a fixed order.
const std::vector<std::string>& template_ids(MathFamily family);

/// Deterministic integer source: a 64-bit Mersenne Twister with portable
/// rejection sampling, so streams match across standard libraries.
class MathRng {
public:
    explicit MathRng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t below(std::uint64_t bound);
    std::int64_t range(IntRange r);
    std::int64_t range(std::int64_t lo, std::int64_t hi) { return range(IntRange{lo, hi}); }
    bool coin() { return below(2) == 1; }
    /// Index drawn proportionally to integer weights (not all zero).
    std::size_t weighted(std::span<const std::uint64_t> weights);

private:
    std::mt19937_64 engine_;
};

/// Seed of record `index` in the stream started by `master`.
std::uint64_t record_seed(std::uint64_t master, std::uint64_t index);

// Renderers: build a record from fixed parameters. The generators draw
// parameters and variant, then call these.
MathProblemRecord make_arithmetic(const std::vector<std::int64_t>& operands,
                                  const std::vector<char>& operators, std::size_t variant);
struct FractionTerm {
    std::int64_t num = 0;
    std::int64_t den = 1;
};
/// signs[i] is '+' or '-' and joins terms[i] to terms[i + 1].
MathProblemRecord make_fraction(const std::vector<FractionTerm>& terms,
                                const std::vector<char>& signs, std::size_t variant);
/// a*x + b = c; throws Error(InvalidArgument) when a == 0.
MathProblemRecord make_linear(std::int64_t a, std::int64_t b, std::int64_t c, std::size_t variant);
/// Scenario parameters by name; see word_scenarios().
MathProblemRecord make_word_problem(const std::string& scenario, const nlohmann::json& params);
const std::vector<std::string>& word_scenarios();

MathProblemRecord gen_arithmetic(const GeneratorConfig& cfg, MathRng& rng);
MathProblemRecord gen_fraction_expression(const GeneratorConfig& cfg, MathRng& rng);
MathProblemRecord gen_linear_equation(const GeneratorConfig& cfg, MathRng& rng);
/// Throws Error(UnsatisfiableTemplate) when no valid parameters are found
/// within the retry budget.
MathProblemRecord gen_word_problem(const GeneratorConfig& cfg, MathRng& rng);

/// Record `index` of the corpus described by cfg. Families are laid out in
/// enum order by their counts.
MathProblemRecord generate_record(const GeneratorConfig& cfg, std::uint64_t index);
std::vector<MathProblemRecord> generate_corpus(const GeneratorConfig& cfg, std::size_t workers = 1);

/// Lowercase words that mark explanatory solutions.
std::set<std::string> default_instructional_words();

/// Prepends a header naming exactly the record's operations to records
/// whose solution contains an instructional word. Phrasing is drawn from
/// the record's own seed.
void postprocess_headers(std::span<MathProblemRecord> records,
                         const std::set<std::string>& instructional_words);
std::string make_header(const MathProblemRecord& record);

enum class VerifyStatus { Pass, AnswerMismatch, SolutionParseFailure, InvalidParameters };
std::string to_string(VerifyStatus s);

struct VerifyResult {
    VerifyStatus status = VerifyStatus::Pass;
    std::string message;
    bool ok() const noexcept { return status == VerifyStatus::Pass; }
};

/// Recomputes the answer from record.params with an independent
/// arbitrary-precision evaluator and checks both the answer field and the
/// last number stated in the solution.
VerifyResult verify_record(const MathProblemRecord& record);

/// Last number ("12", "-3", "5/6") in text, if any.
std::optional<std::string> last_number(std::string_view text);

/// Full document text: header, problem and solution separated by blank lines.
std::string record_text(const MathProblemRecord& r);
Document record_to_document(const MathProblemRecord& r, std::uint64_t index);

}  // namespace corpusforge
