// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

// Answer checking for generated math records. Deliberately shares no
// arithmetic with the generator: values are recomputed in arbitrary
// precision from the stored parameters, using closed forms for the word
// problem scenarios.

#include <boost/multiprecision/cpp_int.hpp>

#include "synth_math.hpp"

namespace corpusforge {

namespace {

using big = boost::multiprecision::cpp_rational;
using nlohmann::json;

struct Bad {
    VerifyStatus status;
    std::string message;
};

big integer_param(const json& p, const char* key) {
    if (!p.contains(key) || !p.at(key).is_number_integer()) {
        throw Bad{VerifyStatus::InvalidParameters, std::string("missing integer parameter '") + key + "'"};
    }
    return big(p.at(key).get<std::int64_t>());
}

big to_big(const Rational& r) { return big(r.num()) / big(r.den()); }

big parse_big(const std::string& s) {
    auto slash = s.find('/');
    try {
        big num(boost::multiprecision::cpp_int(s.substr(0, slash)));
        if (slash == std::string::npos) return num;
        boost::multiprecision::cpp_int den(s.substr(slash + 1));
        if (den == 0) throw Bad{VerifyStatus::SolutionParseFailure, "zero denominator in '" + s + "'"};
        return num / big(den);
    } catch (const std::runtime_error&) {
        throw Bad{VerifyStatus::SolutionParseFailure, "unparseable number '" + s + "'"};
    }
}

int precedence(char op) { return op == '*' || op == '/' ? 2 : 1; }

big apply_big(const big& a, char op, const big& b) {
    switch (op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/':
            if (b == 0) throw Bad{VerifyStatus::InvalidParameters, "division by zero"};
            return a / b;
    }
    throw Bad{VerifyStatus::InvalidParameters, "unknown operator"};
}

// Operator-precedence evaluation with explicit value and operator stacks.
big eval_infix(const std::vector<big>& values, const std::vector<char>& ops) {
    std::vector<big> vs{values[0]};
    std::vector<char> os;
    auto reduce = [&] {
        big rhs = vs.back();
        vs.pop_back();
        big lhs = vs.back();
        vs.pop_back();
        vs.push_back(apply_big(lhs, os.back(), rhs));
        os.pop_back();
    };
    for (std::size_t i = 0; i < ops.size(); ++i) {
        while (!os.empty() && precedence(os.back()) >= precedence(ops[i])) reduce();
        os.push_back(ops[i]);
        vs.push_back(values[i + 1]);
    }
    while (!os.empty()) reduce();
    return vs.back();
}

std::vector<char> operator_list(const json& arr) {
    if (!arr.is_array()) throw Bad{VerifyStatus::InvalidParameters, "operators must be an array"};
    std::vector<char> out;
    for (const auto& o : arr) {
        if (!o.is_string() || o.get<std::string>().size() != 1 ||
            std::string("+-*/").find(o.get<std::string>()[0]) == std::string::npos) {
            throw Bad{VerifyStatus::InvalidParameters, "bad operator"};
        }
        out.push_back(o.get<std::string>()[0]);
    }
    return out;
}

std::set<MathOp> ops_of(const std::vector<char>& symbols) {
    std::set<MathOp> out;
    for (char c : symbols) {
        out.insert(c == '+'   ? MathOp::Addition
                   : c == '-' ? MathOp::Subtraction
                   : c == '*' ? MathOp::Multiplication
                              : MathOp::Division);
    }
    return out;
}

struct Expected {
    big answer;
    std::set<MathOp> allowed_ops;
};

Expected expected_arithmetic(const json& p) {
    if (!p.contains("operands") || !p.at("operands").is_array() || p.at("operands").empty()) {
        throw Bad{VerifyStatus::InvalidParameters, "missing operands"};
    }
    std::vector<big> values;
    for (const auto& v : p.at("operands")) {
        if (!v.is_number_integer()) throw Bad{VerifyStatus::InvalidParameters, "operands must be integers"};
        values.emplace_back(v.get<std::int64_t>());
    }
    auto ops = operator_list(p.value("operators", json::array()));
    if (ops.size() + 1 != values.size()) throw Bad{VerifyStatus::InvalidParameters, "operand count"};
    return {eval_infix(values, ops), ops_of(ops)};
}

Expected expected_fraction(const json& p) {
    if (!p.contains("terms") || !p.at("terms").is_array() || p.at("terms").empty()) {
        throw Bad{VerifyStatus::InvalidParameters, "missing terms"};
    }
    std::vector<big> values;
    for (const auto& t : p.at("terms")) {
        if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer() || !t[1].is_number_integer() ||
            t[1].get<std::int64_t>() == 0) {
            throw Bad{VerifyStatus::InvalidParameters, "terms must be [num, den] with den != 0"};
        }
        values.push_back(big(t[0].get<std::int64_t>()) / big(t[1].get<std::int64_t>()));
    }
    auto signs = operator_list(p.value("signs", json::array()));
    if (signs.size() + 1 != values.size()) throw Bad{VerifyStatus::InvalidParameters, "term count"};
    big total = values[0];
    for (std::size_t i = 0; i < signs.size(); ++i) {
        if (signs[i] == '+') {
            total += values[i + 1];
        } else if (signs[i] == '-') {
            total -= values[i + 1];
        } else {
            throw Bad{VerifyStatus::InvalidParameters, "fraction signs are + or -"};
        }
    }
    return {total, ops_of(signs)};
}

Expected expected_linear(const json& p) {
    big a = integer_param(p, "a"), b = integer_param(p, "b"), c = integer_param(p, "c");
    if (a == 0) throw Bad{VerifyStatus::InvalidParameters, "a == 0"};
    big x = (c - b) / a;
    if (a * x + b != c) throw Bad{VerifyStatus::InvalidParameters, "substitution failed"};
    return {x, {MathOp::Addition, MathOp::Subtraction, MathOp::Division}};
}

Expected expected_word(const json& p) {
    using enum MathOp;
    std::string s = p.value("scenario", std::string());
    auto I = [&](const char* k) { return integer_param(p, k); };
    const std::set<MathOp> all = {Addition, Subtraction, Multiplication, Division};
    if (s == "ages_pencils") {
        // Pencils: first owner 2(d), second 2(d) + gap, d = sum - 2 * age1.
        big d = I("sum_ages") - 2 * I("age1");
        return {4 * d + I("pencil_gap"), all};
    }
    if (s == "shopping") return {I("paid") - I("count") * I("price"), all};
    if (s == "sharing") {
        if (I("friends") == 0) throw Bad{VerifyStatus::InvalidParameters, "no friends"};
        return {(I("total") - I("kept")) / I("friends"), all};
    }
    if (s == "savings") return {I("start") + I("weekly") * I("weeks"), all};
    if (s == "garden") return {I("rows") * I("per_row") - I("wilted"), all};
    if (s == "ages_future") return {(I("factor") + 1) * I("age2") + 2 * I("years"), all};
    if (s == "reading") return {(I("pages") - I("per_day") * I("days")) / 2, all};
    throw Bad{VerifyStatus::InvalidParameters, "unknown scenario '" + s + "'"};
}

}  // namespace

std::optional<std::string> last_number(std::string_view text) {
    std::optional<std::string> last;
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    auto alnum = [&](char c) { return digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
    for (std::size_t i = 0; i < text.size();) {
        if (!digit(text[i]) || (i > 0 && (digit(text[i - 1]) || text[i - 1] == '/'))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (i > 0 && text[i - 1] == '-' && (i < 2 || !(alnum(text[i - 2]) || text[i - 2] == ')'))) --start;
        while (i < text.size() && digit(text[i])) ++i;
        if (i + 1 < text.size() && text[i] == '/' && digit(text[i + 1])) {
            ++i;
            while (i < text.size() && digit(text[i])) ++i;
        }
        last = std::string(text.substr(start, i - start));
    }
    return last;
}

std::string to_string(VerifyStatus s) {
    switch (s) {
        case VerifyStatus::Pass: return "Pass";
        case VerifyStatus::AnswerMismatch: return "AnswerMismatch";
        case VerifyStatus::SolutionParseFailure: return "SolutionParseFailure";
        case VerifyStatus::InvalidParameters: return "InvalidParameters";
    }
    return "?";
}

VerifyResult verify_record(const MathProblemRecord& record) {
    try {
        Expected e;
        switch (record.family) {
            case MathFamily::Arithmetic: e = expected_arithmetic(record.params); break;
            case MathFamily::Fraction: e = expected_fraction(record.params); break;
            case MathFamily::LinearEquation: e = expected_linear(record.params); break;
            case MathFamily::WordProblem: e = expected_word(record.params); break;
        }
        for (auto op : record.operations) {
            if (!e.allowed_ops.count(op)) {
                return {VerifyStatus::InvalidParameters, "operation '" + to_string(op) + "' not used"};
            }
        }
        if (to_big(record.answer) != e.answer) {
            return {VerifyStatus::AnswerMismatch,
                    "answer field " + record.answer.to_string() + " != " + e.answer.str()};
        }
        auto stated = last_number(record.solution_text);
        if (!stated) return {VerifyStatus::SolutionParseFailure, "solution states no number"};
        if (parse_big(*stated) != e.answer) {
            return {VerifyStatus::AnswerMismatch, "solution ends with " + *stated + ", expected " + e.answer.str()};
        }
        return {};
    } catch (const Bad& b) {
        return {b.status, b.message};
    } catch (const nlohmann::json::exception& ex) {
        return {VerifyStatus::InvalidParameters, ex.what()};
    }
}

}  // namespace corpusforge
