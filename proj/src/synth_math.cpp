// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#include "synth_math.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <limits>
#include <numeric>

#include "embedded_data.hpp"
#include "error.hpp"
#include "util.hpp"

namespace corpusforge {

// ---------------------------------------------------------------- Rational

namespace {

std::int64_t narrow(__int128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
        throw Error(ErrorCode::InvalidArgument, "rational overflow");
    }
    return static_cast<std::int64_t>(v);
}

__int128 abs128(__int128 v) { return v < 0 ? -v : v; }

__int128 gcd128(__int128 a, __int128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace

Rational Rational::from_wide(__int128 num, __int128 den) {
    if (den == 0) throw Error(ErrorCode::InvalidArgument, "division by zero");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    __int128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    Rational r;
    r.num_ = narrow(num);
    r.den_ = narrow(den);
    return r;
}

Rational::Rational(std::int64_t num, std::int64_t den) { *this = from_wide(num, den); }

Rational Rational::operator+(const Rational& o) const {
    return from_wide(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                     static_cast<__int128>(den_) * o.den_);
}
Rational Rational::operator-(const Rational& o) const {
    return from_wide(static_cast<__int128>(num_) * o.den_ - static_cast<__int128>(o.num_) * den_,
                     static_cast<__int128>(den_) * o.den_);
}
Rational Rational::operator*(const Rational& o) const {
    return from_wide(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
}
Rational Rational::operator/(const Rational& o) const {
    return from_wide(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
}
Rational Rational::operator-() const { return from_wide(-static_cast<__int128>(num_), den_); }

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
    auto fail = [&]() -> Rational {
        throw Error(ErrorCode::Format, "not a rational: '" + std::string(text) + "'");
    };
    auto slash = text.find('/');
    std::string_view a = text.substr(0, slash);
    std::int64_t num = 0, den = 1;
    auto r = std::from_chars(a.data(), a.data() + a.size(), num);
    if (a.empty() || r.ec != std::errc() || r.ptr != a.data() + a.size()) return fail();
    if (slash != std::string_view::npos) {
        std::string_view b = text.substr(slash + 1);
        auto r2 = std::from_chars(b.data(), b.data() + b.size(), den);
        if (b.empty() || b[0] == '-' || r2.ec != std::errc() || r2.ptr != b.data() + b.size() || den == 0) {
            return fail();
        }
    }
    return Rational(num, den);
}

// ------------------------------------------------------------- enums, rng

std::string to_string(MathFamily f) {
    switch (f) {
        case MathFamily::Arithmetic: return "arithmetic";
        case MathFamily::Fraction: return "fraction";
        case MathFamily::LinearEquation: return "linear_equation";
        case MathFamily::WordProblem: return "word_problem";
    }
    return "?";
}

MathFamily parse_math_family(std::string_view s) {
    for (auto f : {MathFamily::Arithmetic, MathFamily::Fraction, MathFamily::LinearEquation,
                   MathFamily::WordProblem}) {
        if (to_string(f) == s) return f;
    }
    throw Error(ErrorCode::Config, "unknown problem family '" + std::string(s) + "'");
}

std::string to_string(MathOp op) {
    switch (op) {
        case MathOp::Addition: return "addition";
        case MathOp::Subtraction: return "subtraction";
        case MathOp::Multiplication: return "multiplication";
        case MathOp::Division: return "division";
    }
    return "?";
}

namespace {

MathOp parse_op_name(std::string_view s) {
    for (auto op : {MathOp::Addition, MathOp::Subtraction, MathOp::Multiplication, MathOp::Division}) {
        if (to_string(op) == s) return op;
    }
    throw Error(ErrorCode::Format, "unknown operation '" + std::string(s) + "'");
}

MathOp op_for_symbol(char c) {
    switch (c) {
        case '+': return MathOp::Addition;
        case '-': return MathOp::Subtraction;
        case '*': return MathOp::Multiplication;
        case '/': return MathOp::Division;
    }
    throw Error(ErrorCode::InvalidArgument, std::string("unknown operator '") + c + "'");
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t MathRng::below(std::uint64_t bound) {
    if (bound == 0) throw Error(ErrorCode::InvalidArgument, "empty sampling range");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = engine_();
        if (r >= threshold) return r % bound;
    }
}

std::int64_t MathRng::range(IntRange r) {
    if (r.lo > r.hi) throw Error(ErrorCode::InvalidArgument, "empty sampling range");
    std::uint64_t span = static_cast<std::uint64_t>(r.hi) - static_cast<std::uint64_t>(r.lo) + 1;
    std::uint64_t off = span == 0 ? engine_() : below(span);
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(r.lo) + off);
}

std::size_t MathRng::weighted(std::span<const std::uint64_t> weights) {
    std::uint64_t total = 0;
    for (auto w : weights) total += w;
    std::uint64_t pick = below(total);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (pick < weights[i]) return i;
        pick -= weights[i];
    }
    return weights.size() - 1;
}

std::uint64_t record_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ index);
}

// --------------------------------------------------------------- templates

namespace {

using Vars = std::vector<std::pair<std::string_view, std::string>>;

std::string fill(std::string_view tmpl, const Vars& vars) {
    std::string out;
    for (std::size_t i = 0; i < tmpl.size();) {
        if (tmpl[i] == '{') {
            auto close = tmpl.find('}', i);
            std::string_view key = tmpl.substr(i + 1, close - i - 1);
            bool found = false;
            for (const auto& [k, v] : vars) {
                if (k == key) {
                    out += v;
                    found = true;
                    break;
                }
            }
            if (!found) throw Error(ErrorCode::InvalidArgument, "template key '" + std::string(key) + "'");
            i = close + 1;
        } else {
            out += tmpl[i++];
        }
    }
    return out;
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out += '\n';
        out += lines[i];
    }
    return out;
}

std::string S(std::int64_t v) { return std::to_string(v); }
std::string S(const Rational& r) { return r.to_string(); }

constexpr std::size_t kVariants = 5;

struct ArithStyle {
    const char* problem;
    const char* first_step;
    const char* step;
    const char* final;
};

constexpr std::array<ArithStyle, kVariants> kArith = {{
    {"Calculate {expr}.", "{a} {op} {b} = {r}.", "{a} {op} {b} = {r}.", "The answer is {ans}."},
    {"What is {expr}?", "First, {a} {op} {b} = {r}.", "Then, {a} {op} {b} = {r}.",
     "Therefore, {expr} = {ans}."},
    {"Evaluate the expression {expr}.", "Step {k}: {a} {op} {b} = {r}.", "Step {k}: {a} {op} {b} = {r}.",
     "Final answer: {ans}"},
    {"Find the value of {expr}.", "Working out {a} {op} {b} gives {r}.",
     "Working out {a} {op} {b} gives {r}.", "So the value is {ans}."},
    {"Work out {expr}.", "{a} {op} {b} equals {r}.", "{a} {op} {b} equals {r}.", "Result: {ans}"},
}};

const char* kPlaces[] = {"Ones", "Tens", "Hundreds", "Thousands", "Ten-thousands", "Hundred-thousands"};

// Column addition of two non-negative integers, narrated only when some
// column carries.
std::vector<std::string> carry_lines(std::int64_t a, std::int64_t b) {
    std::string da = std::to_string(a), db = std::to_string(b);
    std::size_t cols = std::max(da.size(), db.size());
    auto digit = [](const std::string& s, std::size_t i) {
        return i < s.size() ? s[s.size() - 1 - i] - '0' : 0;
    };
    bool any_carry = false;
    int carry = 0;
    for (std::size_t i = 0; i < cols; ++i) {
        int sum = digit(da, i) + digit(db, i) + carry;
        carry = sum / 10;
        if (carry && i + 1 < cols) any_carry = true;
    }
    if (!any_carry) return {};
    std::vector<std::string> lines;
    lines.push_back("Add " + da + " and " + db + " column by column, starting from the ones.");
    carry = 0;
    for (std::size_t i = 0; i < cols; ++i) {
        int x = digit(da, i), y = digit(db, i);
        int sum = x + y + carry;
        std::string place = i < std::size(kPlaces) ? kPlaces[i] : "Column " + std::to_string(i + 1);
        std::string line = place + ": " + std::to_string(x) + " + " + std::to_string(y);
        if (carry) line += " + " + std::to_string(carry);
        line += " = " + std::to_string(sum);
        if (i + 1 < cols && sum >= 10) {
            line += ", write " + std::to_string(sum % 10) + " and carry " + std::to_string(sum / 10) + ".";
            carry = sum / 10;
        } else if (i + 1 < cols) {
            line += ", write " + std::to_string(sum) + ".";
            carry = 0;
        } else {
            line += ", write " + std::to_string(sum) + ".";
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

Rational apply(const Rational& a, char op, const Rational& b) {
    switch (op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
    }
    throw Error(ErrorCode::InvalidArgument, std::string("unknown operator '") + op + "'");
}

std::string op_text(char op) { return std::string(1, op); }

void check_variant(std::size_t variant) {
    if (variant >= kVariants) {
        throw Error(ErrorCode::InvalidArgument, "template variant out of range");
    }
}

std::string variant_id(MathFamily f, std::size_t variant) {
    return to_string(f) + ".v" + std::to_string(variant + 1);
}

}  // namespace

const std::vector<std::string>& template_ids(MathFamily family) {
    static const auto table = [] {
        std::map<MathFamily, std::vector<std::string>> t;
        for (auto f : {MathFamily::Arithmetic, MathFamily::Fraction, MathFamily::LinearEquation}) {
            for (std::size_t v = 0; v < kVariants; ++v) t[f].push_back(variant_id(f, v));
        }
        for (const auto& s : word_scenarios()) t[MathFamily::WordProblem].push_back("word_problem." + s);
        return t;
    }();
    return table.at(family);
}

MathProblemRecord make_arithmetic(const std::vector<std::int64_t>& operands,
                                  const std::vector<char>& operators, std::size_t variant) {
    check_variant(variant);
    if (operands.empty() || operators.size() + 1 != operands.size()) {
        throw Error(ErrorCode::InvalidArgument, "arithmetic needs one more operand than operators");
    }
    const ArithStyle& st = kArith[variant];
    MathProblemRecord rec;
    rec.family = MathFamily::Arithmetic;
    rec.template_id = variant_id(rec.family, variant);

    std::string expr = S(operands[0]);
    for (std::size_t i = 0; i < operators.size(); ++i) {
        rec.operations.insert(op_for_symbol(operators[i]));
        expr += " " + op_text(operators[i]) + " " + S(operands[i + 1]);
    }

    std::vector<std::string> lines;
    std::size_t k = 0;
    auto step = [&](const Rational& a, char op, const Rational& b, const Rational& r) {
        if (op == '+' && a.is_integer() && b.is_integer() && a.num() >= 0 && b.num() >= 0) {
            for (auto& l : carry_lines(a.num(), b.num())) lines.push_back(std::move(l));
        }
        ++k;
        lines.push_back(fill(k == 1 ? st.first_step : st.step,
                             {{"k", S(static_cast<std::int64_t>(k))},
                              {"a", S(a)},
                              {"op", op_text(op)},
                              {"b", S(b)},
                              {"r", S(r)}}));
    };

    bool mixed = false;
    bool has_mul = false, has_add = false;
    for (char op : operators) {
        (op == '*' || op == '/' ? has_mul : has_add) = true;
    }
    mixed = has_mul && has_add;
    if (mixed) lines.push_back("Multiplication and division come before addition and subtraction.");

    std::vector<Rational> terms;
    std::vector<char> add_ops;
    Rational cur(operands[0]);
    for (std::size_t i = 0; i < operators.size(); ++i) {
        char op = operators[i];
        Rational rhs(operands[i + 1]);
        if (op == '*' || op == '/') {
            Rational r = apply(cur, op, rhs);
            step(cur, op, rhs, r);
            cur = r;
        } else {
            terms.push_back(cur);
            add_ops.push_back(op);
            cur = rhs;
        }
    }
    terms.push_back(cur);
    Rational acc = terms[0];
    for (std::size_t i = 0; i < add_ops.size(); ++i) {
        Rational r = apply(acc, add_ops[i], terms[i + 1]);
        step(acc, add_ops[i], terms[i + 1], r);
        acc = r;
    }
    rec.answer = acc;
    lines.push_back(fill(st.final, {{"expr", expr}, {"ans", S(acc)}}));
    rec.problem_text = fill(st.problem, {{"expr", expr}});
    rec.solution_text = join_lines(lines);

    rec.params["operands"] = operands;
    std::vector<std::string> ops;
    for (char c : operators) ops.push_back(op_text(c));
    rec.params["operators"] = ops;
    return rec;
}

// ---------------------------------------------------------------- fraction

namespace {

struct FracStyle {
    const char* problem;
    const char* lcd;
    const char* same;
    const char* final;
};

constexpr std::array<FracStyle, kVariants> kFrac = {{
    {"Calculate {expr}.", "The least common denominator of {dens} is {lcd}.",
     "All fractions already have the denominator {lcd}.", "The answer is {ans}."},
    {"What is {expr}? Give the answer in lowest terms.",
     "First, rewrite every fraction over the common denominator {lcd}.",
     "First, note the shared denominator {lcd}.", "Therefore the result is {ans}."},
    {"Simplify {expr}.", "Step 1: the denominators {dens} have least common multiple {lcd}.",
     "Step 1: every denominator is already {lcd}.", "Final answer: {ans}"},
    {"Find {expr} as a fraction in lowest terms.", "A common denominator for {dens} is {lcd}.",
     "The denominators agree, so we work over {lcd}.", "So the value is {ans}."},
    {"Combine the fractions {expr}.", "Bring each fraction to the denominator {lcd}.",
     "Each fraction is already over {lcd}.", "Result: {ans}"},
}};

std::string frac_text(std::int64_t n, std::int64_t d) { return S(n) + "/" + S(d); }

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
    return narrow(static_cast<__int128>(a) / std::gcd(a, b) * b);
}

}  // namespace

MathProblemRecord make_fraction(const std::vector<FractionTerm>& terms, const std::vector<char>& signs,
                                std::size_t variant) {
    check_variant(variant);
    if (terms.empty() || signs.size() + 1 != terms.size()) {
        throw Error(ErrorCode::InvalidArgument, "fraction needs one more term than signs");
    }
    for (const auto& t : terms) {
        if (t.den <= 0 || t.num < 0) {
            throw Error(ErrorCode::InvalidArgument, "fraction terms need num >= 0 and den > 0");
        }
    }
    for (char s : signs) {
        if (s != '+' && s != '-') throw Error(ErrorCode::InvalidArgument, "fraction signs are + or -");
    }
    const FracStyle& st = kFrac[variant];
    MathProblemRecord rec;
    rec.family = MathFamily::Fraction;
    rec.template_id = variant_id(rec.family, variant);

    std::string expr = frac_text(terms[0].num, terms[0].den);
    std::string dens = S(terms[0].den);
    std::int64_t lcd = terms[0].den;
    bool same = true;
    for (std::size_t i = 0; i < signs.size(); ++i) {
        rec.operations.insert(op_for_symbol(signs[i]));
        const auto& t = terms[i + 1];
        expr += " " + op_text(signs[i]) + " " + frac_text(t.num, t.den);
        dens += (i + 2 == terms.size() ? " and " : ", ") + S(t.den);
        if (t.den != terms[0].den) same = false;
        lcd = lcm64(lcd, t.den);
    }

    std::vector<std::string> lines;
    std::vector<std::int64_t> scaled;
    if (terms.size() > 1) {
        lines.push_back(fill(same ? st.same : st.lcd, {{"dens", dens}, {"lcd", S(lcd)}}));
    }
    for (const auto& t : terms) {
        std::int64_t k = lcd / t.den;
        std::int64_t n = narrow(static_cast<__int128>(t.num) * k);
        if (k != 1) lines.push_back(frac_text(t.num, t.den) + " = " + frac_text(n, lcd) + ".");
        scaled.push_back(n);
    }
    __int128 total = scaled[0];
    std::string combine = frac_text(scaled[0], lcd);
    for (std::size_t i = 0; i < signs.size(); ++i) {
        total += signs[i] == '+' ? scaled[i + 1] : -static_cast<__int128>(scaled[i + 1]);
        combine += " " + op_text(signs[i]) + " " + frac_text(scaled[i + 1], lcd);
    }
    std::int64_t sum = narrow(total);
    if (terms.size() > 1) lines.push_back(combine + " = " + frac_text(sum, lcd) + ".");
    rec.answer = Rational(sum, lcd);
    if (rec.answer.to_string() != frac_text(sum, lcd)) {
        lines.push_back(frac_text(sum, lcd) + " simplifies to " + rec.answer.to_string() + ".");
    }
    lines.push_back(fill(st.final, {{"ans", S(rec.answer)}}));
    rec.problem_text = fill(st.problem, {{"expr", expr}});
    rec.solution_text = join_lines(lines);

    nlohmann::json jt = nlohmann::json::array();
    for (const auto& t : terms) jt.push_back({t.num, t.den});
    rec.params["terms"] = jt;
    std::vector<std::string> sg;
    for (char c : signs) sg.push_back(op_text(c));
    rec.params["signs"] = sg;
    return rec;
}

// ------------------------------------------------------------------ linear

namespace {

struct LinStyle {
    const char* problem;
    const char* subtract;
    const char* add;
    const char* divide;
    const char* final;
};

constexpr std::array<LinStyle, kVariants> kLin = {{
    {"Solve for x: {eq}.", "Subtract {b} from both sides: {lhs} = {rhs}.",
     "Add {b} to both sides: {lhs} = {rhs}.", "Divide both sides by {a}: x = {x}.", "The answer is x = {x}."},
    {"Find x if {eq}.", "First, subtract {b} on each side, giving {lhs} = {rhs}.",
     "First, add {b} on each side, giving {lhs} = {rhs}.", "Then divide each side by {a}, so x = {x}.",
     "Therefore x = {x}."},
    {"What value of x satisfies {eq}?", "Step 1: subtracting {b} removes the constant, so {lhs} = {rhs}.",
     "Step 1: adding {b} removes the constant, so {lhs} = {rhs}.", "Step 2: divide by {a} to get x = {x}.",
     "Final answer: x = {x}"},
    {"Solve the equation {eq}.", "Taking {b} away from both sides leaves {lhs} = {rhs}.",
     "Adding {b} to both sides leaves {lhs} = {rhs}.", "Dividing both sides by {a} gives x = {x}.",
     "Hence x = {x}."},
    {"Determine x given that {eq}.", "To isolate the x term, subtract {b}: {lhs} = {rhs}.",
     "To isolate the x term, add {b}: {lhs} = {rhs}.", "Divide by the coefficient {a}: x = {x}.",
     "x = {x}"},
}};

std::string x_term(std::int64_t a) {
    if (a == 1) return "x";
    if (a == -1) return "-x";
    return S(a) + "x";
}

}  // namespace

MathProblemRecord make_linear(std::int64_t a, std::int64_t b, std::int64_t c, std::size_t variant) {
    check_variant(variant);
    if (a == 0) throw Error(ErrorCode::InvalidArgument, "linear coefficient must be nonzero");
    const LinStyle& st = kLin[variant];
    MathProblemRecord rec;
    rec.family = MathFamily::LinearEquation;
    rec.template_id = variant_id(rec.family, variant);

    std::string eq = x_term(a);
    if (b > 0) eq += " + " + S(b);
    if (b < 0) eq += " - " + S(narrow(-static_cast<__int128>(b)));
    eq += " = " + S(c);

    Rational rhs = Rational(c) - Rational(b);
    Rational x = rhs / Rational(a);
    std::vector<std::string> lines;
    if (b != 0) {
        Vars v{{"b", S(narrow(abs128(b)))}, {"lhs", x_term(a)}, {"rhs", S(rhs)}};
        lines.push_back(fill(b > 0 ? st.subtract : st.add, v));
        rec.operations.insert(b > 0 ? MathOp::Subtraction : MathOp::Addition);
    }
    if (a != 1) {
        lines.push_back(fill(st.divide, {{"a", S(a)}, {"x", S(x)}}));
        rec.operations.insert(MathOp::Division);
    }
    if (lines.empty()) lines.push_back("The equation already gives x directly.");
    lines.push_back(fill(st.final, {{"x", S(x)}}));
    rec.answer = x;
    rec.problem_text = fill(st.problem, {{"eq", eq}});
    rec.solution_text = join_lines(lines);
    rec.params = {{"a", a}, {"b", b}, {"c", c}};
    return rec;
}

// ------------------------------------------------------------ word problems

namespace {

constexpr std::array<const char*, 12> kNames = {"Sarah", "Asaf", "Maya", "Omar", "Lena", "Ravi",
                                                "Chen",  "Nia",  "Tom",  "Ana",  "Ivan", "Zoe"};

std::int64_t P(const nlohmann::json& p, const char* key) {
    if (!p.contains(key) || !p.at(key).is_number_integer()) {
        throw Error(ErrorCode::InvalidArgument, std::string("word problem parameter '") + key + "' missing");
    }
    return p.at(key).get<std::int64_t>();
}

std::string N(const nlohmann::json& p, const char* key) {
    if (!p.contains(key) || !p.at(key).is_string()) {
        throw Error(ErrorCode::InvalidArgument, std::string("word problem parameter '") + key + "' missing");
    }
    return p.at(key).get<std::string>();
}

void require(bool ok, const std::string& scenario) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, "parameters violate the '" + scenario + "' scenario");
}

struct Built {
    std::string problem;
    std::vector<std::string> lines;
    std::int64_t answer = 0;
    std::set<MathOp> ops;
};

Built build_word(const std::string& s, const nlohmann::json& p) {
    Built b;
    using enum MathOp;
    if (s == "ages_pencils") {
        std::string n1 = N(p, "name1"), n2 = N(p, "name2");
        std::int64_t sum = P(p, "sum_ages"), age1 = P(p, "age1"), gap = P(p, "pencil_gap");
        std::int64_t age2 = sum - age1, diff = age2 - age1;
        require(age1 >= 0 && diff > 0 && gap >= 0, s);
        std::int64_t p1 = 2 * diff, p2 = p1 + gap, total = p1 + p2;
        b.problem = "The gap between the ages of " + n1 + " and " + n2 + " is half the number of pencils " +
                    n1 + " owns. Their ages add up to " + S(sum) + ", and " + n1 + " is " + S(age1) +
                    " years old. " + n2 + " owns " + S(gap) + " more pencils than " + n1 +
                    ". How many pencils do they own together?";
        b.lines = {n2 + " is " + S(sum) + " - " + S(age1) + " = " + S(age2) + " years old.",
                   "The difference between their ages is " + S(age2) + " - " + S(age1) + " = " + S(diff) + ".",
                   "Since that gap is half of " + n1 + "'s pencils, " + n1 + " owns 2 * " + S(diff) + " = " +
                       S(p1) + " pencils.",
                   n2 + " owns " + S(p1) + " + " + S(gap) + " = " + S(p2) + " pencils.",
                   "Together they own " + S(p1) + " + " + S(p2) + " = " + S(total) + " pencils."};
        b.answer = total;
        b.ops = {Subtraction, Multiplication, Addition};
    } else if (s == "shopping") {
        std::string n1 = N(p, "name1");
        std::int64_t count = P(p, "count"), price = P(p, "price"), paid = P(p, "paid");
        std::int64_t cost = count * price;
        require(count >= 1 && price >= 0 && paid >= cost, s);
        b.problem = n1 + " buys " + S(count) + " notebooks for " + S(price) + " dollars each and pays with " +
                    S(paid) + " dollars. How much change does " + n1 + " get?";
        b.lines = {"The notebooks cost " + S(count) + " * " + S(price) + " = " + S(cost) + " dollars.",
                   "The change is " + S(paid) + " - " + S(cost) + " = " + S(paid - cost) + " dollars."};
        b.answer = paid - cost;
        b.ops = {Multiplication, Subtraction};
    } else if (s == "sharing") {
        std::string n1 = N(p, "name1");
        std::int64_t total = P(p, "total"), kept = P(p, "kept"), friends = P(p, "friends");
        require(friends >= 1 && kept >= 0 && total >= kept && (total - kept) % friends == 0, s);
        std::int64_t rest = total - kept, each = rest / friends;
        b.problem = n1 + " has " + S(total) + " stickers, keeps " + S(kept) + " and splits the rest evenly among " +
                    S(friends) + " friends. How many stickers does each friend receive?";
        b.lines = {n1 + " gives away " + S(total) + " - " + S(kept) + " = " + S(rest) + " stickers.",
                   "Each friend receives " + S(rest) + " / " + S(friends) + " = " + S(each) + " stickers."};
        b.answer = each;
        b.ops = {Subtraction, Division};
    } else if (s == "savings") {
        std::string n1 = N(p, "name1");
        std::int64_t start = P(p, "start"), weekly = P(p, "weekly"), weeks = P(p, "weeks");
        require(start >= 0 && weekly >= 0 && weeks >= 1, s);
        std::int64_t saved = weekly * weeks;
        b.problem = n1 + " has " + S(start) + " dollars and puts aside " + S(weekly) +
                    " dollars every week. How much money does " + n1 + " have after " + S(weeks) + " weeks?";
        b.lines = {"Over " + S(weeks) + " weeks " + n1 + " saves " + S(weekly) + " * " + S(weeks) + " = " +
                       S(saved) + " dollars.",
                   "Then " + n1 + " has " + S(start) + " + " + S(saved) + " = " + S(start + saved) + " dollars."};
        b.answer = start + saved;
        b.ops = {Multiplication, Addition};
    } else if (s == "garden") {
        std::string n1 = N(p, "name1");
        std::int64_t rows = P(p, "rows"), per_row = P(p, "per_row"), wilted = P(p, "wilted");
        std::int64_t plants = rows * per_row;
        require(rows >= 1 && per_row >= 0 && wilted >= 0 && wilted <= plants, s);
        b.problem = n1 + " plants " + S(rows) + " rows of tulips with " + S(per_row) + " tulips in each row. Later " +
                    S(wilted) + " of them wilt. How many healthy tulips are left?";
        b.lines = {n1 + " planted " + S(rows) + " * " + S(per_row) + " = " + S(plants) + " tulips.",
                   "After " + S(wilted) + " wilt, " + S(plants) + " - " + S(wilted) + " = " + S(plants - wilted) +
                       " remain."};
        b.answer = plants - wilted;
        b.ops = {Multiplication, Subtraction};
    } else if (s == "ages_future") {
        std::string n1 = N(p, "name1"), n2 = N(p, "name2");
        std::int64_t age2 = P(p, "age2"), factor = P(p, "factor"), years = P(p, "years");
        require(age2 >= 0 && factor >= 1 && years >= 0, s);
        std::int64_t age1 = factor * age2, f1 = age1 + years, f2 = age2 + years;
        b.problem = n1 + " is " + S(factor) + " times as old as " + n2 + ", who is " + S(age2) +
                    ". What will the sum of their ages be in " + S(years) + " years?";
        b.lines = {n1 + " is " + S(factor) + " * " + S(age2) + " = " + S(age1) + " years old.",
                   "In " + S(years) + " years " + n1 + " will be " + S(age1) + " + " + S(years) + " = " + S(f1) + ".",
                   n2 + " will be " + S(age2) + " + " + S(years) + " = " + S(f2) + ".",
                   "The sum will be " + S(f1) + " + " + S(f2) + " = " + S(f1 + f2) + "."};
        b.answer = f1 + f2;
        b.ops = {Multiplication, Addition};
    } else if (s == "reading") {
        std::string n1 = N(p, "name1");
        std::int64_t pages = P(p, "pages"), per_day = P(p, "per_day"), days = P(p, "days");
        std::int64_t read = per_day * days, rem = pages - read;
        require(per_day >= 0 && days >= 1 && rem >= 0 && rem % 2 == 0, s);
        std::int64_t half = rem / 2;
        b.problem = "A book has " + S(pages) + " pages. " + n1 + " reads " + S(per_day) + " pages a day for " +
                    S(days) + " days, and the next day reads half of the pages left. How many pages remain?";
        b.lines = {n1 + " reads " + S(per_day) + " * " + S(days) + " = " + S(read) + " pages in " + S(days) + " days.",
                   "That leaves " + S(pages) + " - " + S(read) + " = " + S(rem) + " pages.",
                   "Half of those is " + S(rem) + " / 2 = " + S(half) + ".",
                   "So " + S(rem) + " - " + S(half) + " = " + S(rem - half) + " pages remain."};
        b.answer = rem - half;
        b.ops = {Multiplication, Subtraction, Division};
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown word problem scenario '" + s + "'");
    }
    return b;
}

// Draws parameters for one scenario, or nullopt when this attempt missed.
std::optional<nlohmann::json> draw_word(const std::string& s, IntRange q, MathRng& rng) {
    auto lo = q.lo, hi = q.hi;
    auto in = [&](std::int64_t a, std::int64_t b) -> std::optional<std::int64_t> {
        if (a > b) return std::nullopt;
        return rng.range(a, b);
    };
    std::size_t i1 = rng.below(kNames.size());
    std::size_t i2 = (i1 + 1 + rng.below(kNames.size() - 1)) % kNames.size();
    nlohmann::json p;
    p["name1"] = kNames[i1];
    if (s == "ages_pencils") {
        auto age1 = in(lo, hi - 1);
        if (!age1) return std::nullopt;
        auto age2 = in(*age1 + 1, hi);
        auto gap = in(0, hi);
        if (!age2 || !gap) return std::nullopt;
        p["name2"] = kNames[i2];
        p["sum_ages"] = *age1 + *age2;
        p["age1"] = *age1;
        p["pencil_gap"] = *gap;
    } else if (s == "shopping") {
        auto count = in(std::max<std::int64_t>(lo, 1), std::min<std::int64_t>(hi, 12));
        auto price = in(lo, hi);
        auto extra = in(0, hi);
        if (!count || !price || !extra) return std::nullopt;
        p["count"] = *count;
        p["price"] = *price;
        p["paid"] = *count * *price + *extra;
    } else if (s == "sharing") {
        auto friends = in(std::max<std::int64_t>(lo, 2), std::min<std::int64_t>(hi, 12));
        auto each = in(lo, hi);
        auto kept = in(0, hi);
        if (!friends || !each || !kept) return std::nullopt;
        p["total"] = *kept + *friends * *each;
        p["kept"] = *kept;
        p["friends"] = *friends;
    } else if (s == "savings") {
        auto start = in(lo, hi);
        auto weekly = in(lo, hi);
        auto weeks = in(std::max<std::int64_t>(lo, 2), std::min<std::int64_t>(hi, 20));
        if (!start || !weekly || !weeks) return std::nullopt;
        p["start"] = *start;
        p["weekly"] = *weekly;
        p["weeks"] = *weeks;
    } else if (s == "garden") {
        auto rows = in(std::max<std::int64_t>(lo, 2), std::min<std::int64_t>(hi, 20));
        auto per_row = in(lo, hi);
        if (!rows || !per_row) return std::nullopt;
        auto wilted = in(0, *rows * *per_row);
        if (!wilted) return std::nullopt;
        p["rows"] = *rows;
        p["per_row"] = *per_row;
        p["wilted"] = *wilted;
    } else if (s == "ages_future") {
        auto age2 = in(lo, hi);
        auto factor = in(2, 5);
        auto years = in(std::max<std::int64_t>(lo, 1), hi);
        if (!age2 || !factor || !years) return std::nullopt;
        p["name2"] = kNames[i2];
        p["age2"] = *age2;
        p["factor"] = *factor;
        p["years"] = *years;
    } else if (s == "reading") {
        auto per_day = in(lo, hi);
        auto days = in(std::max<std::int64_t>(lo, 2), std::min<std::int64_t>(hi, 14));
        auto half = in(lo, hi);
        if (!per_day || !days || !half) return std::nullopt;
        p["pages"] = *per_day * *days + 2 * *half;
        p["per_day"] = *per_day;
        p["days"] = *days;
    }
    return p;
}

constexpr int kWordRetries = 64;

}  // namespace

const std::vector<std::string>& word_scenarios() {
    static const std::vector<std::string> names = {"ages_pencils", "shopping",    "sharing", "savings",
                                                   "garden",       "ages_future", "reading"};
    return names;
}

MathProblemRecord make_word_problem(const std::string& scenario, const nlohmann::json& params) {
    Built b = build_word(scenario, params);
    MathProblemRecord rec;
    rec.family = MathFamily::WordProblem;
    rec.template_id = "word_problem." + scenario;
    rec.problem_text = b.problem;
    b.lines.push_back("The answer is " + S(b.answer) + ".");
    rec.solution_text = join_lines(b.lines);
    rec.answer = Rational(b.answer);
    rec.operations = b.ops;
    rec.params = params;
    rec.params["scenario"] = scenario;
    return rec;
}

// --------------------------------------------------------------- generators

namespace {

std::size_t pick_variant(const GeneratorConfig& cfg, MathFamily f, MathRng& rng) {
    const auto& ids = template_ids(f);
    std::vector<std::uint64_t> w;
    for (const auto& id : ids) {
        auto it = cfg.template_weights.find(id);
        w.push_back(it == cfg.template_weights.end() ? 1 : it->second);
    }
    return rng.weighted(w);
}

}  // namespace

MathProblemRecord gen_arithmetic(const GeneratorConfig& cfg, MathRng& rng) {
    const IntRange r = cfg.arithmetic_operand;
    std::size_t count = static_cast<std::size_t>(rng.range(2, 4));
    std::vector<std::int64_t> operands{rng.range(r)};
    std::vector<char> ops;
    // Value of the current multiplicative run, so divisions stay exact.
    std::int64_t chain = operands[0];
    constexpr char kOps[] = {'+', '-', '*', '/'};
    for (std::size_t i = 1; i < count; ++i) {
        char op = kOps[rng.below(4)];
        std::int64_t operand = 0;
        if (op == '/') {
            std::vector<std::int64_t> divisors;
            std::int64_t lo = std::max<std::int64_t>(1, r.lo);
            std::int64_t hi = chain == 0 ? r.hi : std::min<std::int64_t>(r.hi, chain < 0 ? -chain : chain);
            for (std::int64_t d = lo; d <= hi; ++d) {
                if (chain % d == 0) divisors.push_back(d);
            }
            if (divisors.empty()) {
                op = '*';
            } else {
                operand = divisors[rng.below(divisors.size())];
            }
        }
        if (op != '/') operand = rng.range(r);
        switch (op) {
            case '*': chain = narrow(static_cast<__int128>(chain) * operand); break;
            case '/': chain /= operand; break;
            default: chain = operand; break;
        }
        ops.push_back(op);
        operands.push_back(operand);
    }
    return make_arithmetic(operands, ops, pick_variant(cfg, MathFamily::Arithmetic, rng));
}

MathProblemRecord gen_fraction_expression(const GeneratorConfig& cfg, MathRng& rng) {
    std::size_t count = static_cast<std::size_t>(rng.range(2, 3));
    std::vector<FractionTerm> terms;
    std::vector<char> signs;
    for (std::size_t i = 0; i < count; ++i) {
        terms.push_back({rng.range(cfg.fraction_numerator), rng.range(cfg.fraction_denominator)});
        if (i) signs.push_back(rng.coin() ? '+' : '-');
    }
    return make_fraction(terms, signs, pick_variant(cfg, MathFamily::Fraction, rng));
}

MathProblemRecord gen_linear_equation(const GeneratorConfig& cfg, MathRng& rng) {
    std::int64_t x = rng.range(cfg.linear_x);
    std::int64_t a = 0;
    while (a == 0) a = rng.range(cfg.linear_a);
    std::int64_t b = rng.range(cfg.linear_b);
    std::int64_t c = narrow(static_cast<__int128>(a) * x + b);
    return make_linear(a, b, c, pick_variant(cfg, MathFamily::LinearEquation, rng));
}

MathProblemRecord gen_word_problem(const GeneratorConfig& cfg, MathRng& rng) {
    std::size_t which = pick_variant(cfg, MathFamily::WordProblem, rng);
    const std::string& scenario = word_scenarios()[which];
    for (int attempt = 0; attempt < kWordRetries; ++attempt) {
        if (auto params = draw_word(scenario, cfg.word_quantity, rng)) {
            return make_word_problem(scenario, *params);
        }
    }
    throw Error(ErrorCode::UnsatisfiableTemplate,
                "scenario '" + scenario + "' has no valid parameters in range [" +
                    S(cfg.word_quantity.lo) + ", " + S(cfg.word_quantity.hi) + "]");
}

MathProblemRecord generate_record(const GeneratorConfig& cfg, std::uint64_t index) {
    std::uint64_t offset = index;
    for (auto f : {MathFamily::Arithmetic, MathFamily::Fraction, MathFamily::LinearEquation,
                   MathFamily::WordProblem}) {
        auto it = cfg.counts.find(f);
        std::uint64_t n = it == cfg.counts.end() ? 0 : it->second;
        if (offset < n) {
            std::uint64_t seed = record_seed(cfg.seed, index);
            MathRng rng(seed);
            MathProblemRecord rec;
            switch (f) {
                case MathFamily::Arithmetic: rec = gen_arithmetic(cfg, rng); break;
                case MathFamily::Fraction: rec = gen_fraction_expression(cfg, rng); break;
                case MathFamily::LinearEquation: rec = gen_linear_equation(cfg, rng); break;
                case MathFamily::WordProblem: rec = gen_word_problem(cfg, rng); break;
            }
            rec.seed = seed;
            return rec;
        }
        offset -= n;
    }
    throw Error(ErrorCode::InvalidArgument, "record index beyond configured counts");
}

std::vector<MathProblemRecord> generate_corpus(const GeneratorConfig& cfg, std::size_t workers) {
    cfg.validate();
    std::uint64_t total = cfg.total_count();
    std::vector<MathProblemRecord> out(total);
    workers = std::max<std::size_t>(1, std::min<std::uint64_t>(workers, total));
    run_workers(workers, [&](std::size_t w) {
        for (std::uint64_t i = w; i < total; i += workers) out[i] = generate_record(cfg, i);
    });
    if (cfg.headers) postprocess_headers(out, default_instructional_words());
    return out;
}

// ------------------------------------------------------------------ config

void GeneratorConfig::validate() const {
    auto check = [](IntRange r, const char* name) {
        if (r.lo > r.hi) throw Error(ErrorCode::Config, std::string("range '") + name + "' is empty");
    };
    check(arithmetic_operand, "arithmetic_operand");
    check(fraction_numerator, "fraction_numerator");
    check(fraction_denominator, "fraction_denominator");
    check(linear_x, "linear_x");
    check(linear_a, "linear_a");
    check(linear_b, "linear_b");
    check(word_quantity, "word_quantity");
    if (arithmetic_operand.lo < 0) throw Error(ErrorCode::Config, "arithmetic operands must be >= 0");
    if (fraction_numerator.lo < 0) throw Error(ErrorCode::Config, "fraction numerators must be >= 0");
    if (fraction_denominator.lo < 1) throw Error(ErrorCode::Config, "fraction denominators must be >= 1");
    if (linear_a.lo == 0 && linear_a.hi == 0) throw Error(ErrorCode::Config, "linear_a must allow a nonzero value");
    if (word_quantity.lo < 0) throw Error(ErrorCode::Config, "word quantities must be >= 0");
    constexpr std::int64_t kLimit = 1'000'000;
    for (IntRange r : {arithmetic_operand, fraction_numerator, fraction_denominator, linear_x, linear_a,
                       linear_b, word_quantity}) {
        if (r.lo < -kLimit || r.hi > kLimit) {
            throw Error(ErrorCode::Config, "ranges are limited to +/-" + S(kLimit));
        }
    }
    std::set<std::string> known;
    for (auto f : {MathFamily::Arithmetic, MathFamily::Fraction, MathFamily::LinearEquation,
                   MathFamily::WordProblem}) {
        std::uint64_t total = 0;
        for (const auto& id : template_ids(f)) {
            known.insert(id);
            auto it = template_weights.find(id);
            total += it == template_weights.end() ? 1 : it->second;
        }
        auto c = counts.find(f);
        if (c != counts.end() && c->second > 0 && total == 0) {
            throw Error(ErrorCode::Config, "all templates of '" + to_string(f) + "' have weight 0");
        }
    }
    for (const auto& [id, w] : template_weights) {
        if (!known.count(id)) throw Error(ErrorCode::Config, "unknown template id '" + id + "'");
    }
}

std::uint64_t GeneratorConfig::total_count() const {
    std::uint64_t t = 0;
    for (const auto& [f, n] : counts) t += n;
    return t;
}

GeneratorConfig parse_generator_config(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::Config, "generator config must be a JSON object");
    GeneratorConfig cfg;
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& key = it.key();
            const auto& v = it.value();
            if (key == "seed") {
                cfg.seed = v.get<std::uint64_t>();
            } else if (key == "counts") {
                for (auto c = v.begin(); c != v.end(); ++c) {
                    cfg.counts[parse_math_family(c.key())] = c.value().get<std::uint64_t>();
                }
            } else if (key == "ranges") {
                std::map<std::string, IntRange*> slots = {{"arithmetic_operand", &cfg.arithmetic_operand},
                                                          {"fraction_numerator", &cfg.fraction_numerator},
                                                          {"fraction_denominator", &cfg.fraction_denominator},
                                                          {"linear_x", &cfg.linear_x},
                                                          {"linear_a", &cfg.linear_a},
                                                          {"linear_b", &cfg.linear_b},
                                                          {"word_quantity", &cfg.word_quantity}};
                for (auto r = v.begin(); r != v.end(); ++r) {
                    auto slot = slots.find(r.key());
                    if (slot == slots.end()) throw Error(ErrorCode::Config, "unknown range '" + r.key() + "'");
                    if (!r.value().is_array() || r.value().size() != 2) {
                        throw Error(ErrorCode::Config, "range '" + r.key() + "' must be [lo, hi]");
                    }
                    *slot->second = {r.value()[0].get<std::int64_t>(), r.value()[1].get<std::int64_t>()};
                }
            } else if (key == "template_weights") {
                for (auto w = v.begin(); w != v.end(); ++w) {
                    cfg.template_weights[w.key()] = w.value().get<std::uint64_t>();
                }
            } else if (key == "headers") {
                cfg.headers = v.get<bool>();
            } else {
                throw Error(ErrorCode::Config, "unknown generator config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Config, std::string("generator config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

// ----------------------------------------------------------------- headers

std::set<std::string> default_instructional_words() {
    auto words = parse_line_list(embedded::instructional_words());
    return {words.begin(), words.end()};
}

namespace {

constexpr std::array<const char*, 5> kHeaders = {
    "Here are examples of {ops} exercises.",
    "The following are worked {ops} problems.",
    "Practice problems covering {ops}.",
    "Below are solved exercises on {ops}.",
    "Examples of {ops} with worked solutions.",
};

constexpr std::uint64_t kHeaderStream = 0x6865616465727321ULL;

bool has_instructional_word(std::string_view text, const std::set<std::string>& words) {
    std::string cur;
    auto flush = [&] {
        bool hit = !cur.empty() && words.count(cur);
        cur.clear();
        return hit;
    };
    for (char c : text) {
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
            cur += static_cast<char>(c | 0x20);
        } else if (flush()) {
            return true;
        }
    }
    return flush();
}

}  // namespace

std::string make_header(const MathProblemRecord& record) {
    if (record.operations.empty()) return {};
    std::string ops;
    for (auto op : record.operations) {
        if (!ops.empty()) ops += ", ";
        ops += to_string(op);
    }
    MathRng rng(record.seed ^ kHeaderStream);
    return fill(kHeaders[rng.below(kHeaders.size())], {{"ops", ops}});
}

void postprocess_headers(std::span<MathProblemRecord> records, const std::set<std::string>& instructional_words) {
    for (auto& r : records) {
        if (has_instructional_word(r.solution_text, instructional_words)) r.header = make_header(r);
    }
}

// ----------------------------------------------------------- serialization

nlohmann::ordered_json record_to_json(const MathProblemRecord& r) {
    nlohmann::ordered_json j;
    j["family"] = to_string(r.family);
    j["template_id"] = r.template_id;
    j["seed"] = r.seed;
    std::vector<std::string> ops;
    for (auto op : r.operations) ops.push_back(to_string(op));
    j["operations"] = ops;
    j["answer"] = r.answer.to_string();
    if (!r.header.empty()) j["header"] = r.header;
    j["problem_text"] = r.problem_text;
    j["solution_text"] = r.solution_text;
    j["params"] = r.params;
    return j;
}

MathProblemRecord record_from_json(const nlohmann::json& j) {
    try {
        MathProblemRecord r;
        r.family = parse_math_family(j.at("family").get<std::string>());
        r.template_id = j.at("template_id").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& op : j.at("operations")) r.operations.insert(parse_op_name(op.get<std::string>()));
        r.answer = Rational::parse(j.at("answer").get<std::string>());
        r.header = j.value("header", std::string());
        r.problem_text = j.at("problem_text").get<std::string>();
        r.solution_text = j.at("solution_text").get<std::string>();
        r.params = j.at("params");
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Format, std::string("math record: ") + e.what());
    }
}

std::string record_text(const MathProblemRecord& r) {
    std::string out;
    if (!r.header.empty()) out += r.header + "\n\n";
    out += r.problem_text + "\n\n" + r.solution_text;
    return out;
}

Document record_to_document(const MathProblemRecord& r, std::uint64_t index) {
    char id[48];
    std::snprintf(id, sizeof id, "synth-math-%08llu", static_cast<unsigned long long>(index));
    Document d;
    d.id = id;
    d.text = record_text(r);
    d.source = "synth_math";
    d.license_tier = LicenseTier::Tier1;
    d.category = Category::Math;
    d.synthetic_status = SyntheticStatus::Synthetic;
    d.generator_provenance = GeneratorProvenance{"synth_math", "repo-license", "programmatic"};
    auto j = record_to_json(r);
    d.extra = nlohmann::json::object();
    for (const char* k : {"family", "template_id", "seed", "operations", "answer", "params"}) d.extra[k] = j[k];
    return d;
}

}  // namespace corpusforge
