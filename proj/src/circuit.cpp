#include "qslprobe/circuit.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "qslprobe/errors.hpp"
#include "qslprobe/gates.hpp"

namespace qslprobe {

long long Circuit::total_gate_count() const {
    long long total = 0;
    for (const auto& ins : instructions) total += ins.repeat * static_cast<long long>(ins.body.size());
    return total;
}

namespace {

struct Token {
    std::string text;
    int line;
};

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> tokens;
    int line = 1;
    std::string cur;
    bool in_comment = false;
    auto flush = [&] {
        if (!cur.empty()) {
            tokens.push_back({cur, line});
            cur.clear();
        }
    };
    for (char c : text) {
        if (c == '\n') {
            flush();
            in_comment = false;
            ++line;
            continue;
        }
        if (in_comment) continue;
        if (c == '#') {
            flush();
            in_comment = true;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
            continue;
        }
        if (c == '{' || c == '}') {
            flush();
            tokens.push_back({std::string(1, c), line});
            continue;
        }
        cur.push_back(c);
    }
    flush();
    return tokens;
}

long long parse_count(const Token& tok, const char* what) {
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
    if (ec != std::errc() || ptr != tok.text.data() + tok.text.size())
        throw CircuitSyntaxError(tok.line, std::string("expected ") + what + ", got '" + tok.text + "'");
    return value;
}

int parse_qubit(const Token& tok, int n_qubits) {
    if (tok.text.size() < 2 || (tok.text[0] != 'q' && tok.text[0] != 'Q'))
        throw CircuitSyntaxError(tok.line, "expected qubit reference like q0, got '" + tok.text + "'");
    int index = 0;
    const char* begin = tok.text.data() + 1;
    const char* end = tok.text.data() + tok.text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, index);
    if (ec != std::errc() || ptr != end)
        throw CircuitSyntaxError(tok.line, "bad qubit reference '" + tok.text + "'");
    if (index < 0 || index >= n_qubits)
        throw BadIndex("line " + std::to_string(tok.line) + ": qubit q" + std::to_string(index) +
                       " out of range for " + std::to_string(n_qubits) + " qubits");
    return index;
}

}  // namespace

Circuit parse_circuit(const std::string& text) {
    const std::vector<Token> tokens = tokenize(text);
    std::size_t pos = 0;
    auto peek = [&]() -> const Token* { return pos < tokens.size() ? &tokens[pos] : nullptr; };
    auto next = [&](const char* expected) -> const Token& {
        if (pos >= tokens.size()) {
            const int line = tokens.empty() ? 1 : tokens.back().line;
            throw CircuitSyntaxError(line, std::string("unexpected end of input, expected ") + expected);
        }
        return tokens[pos++];
    };

    Circuit circuit;
    {
        const Token& head = next("'qubits <n>'");
        if (head.text != "qubits")
            throw CircuitSyntaxError(head.line, "circuit must start with 'qubits <n>'");
        const long long n = parse_count(next("qubit count"), "qubit count");
        if (n <= 0) throw CircuitSyntaxError(head.line, "qubit count must be >= 1");
        circuit.n_qubits = static_cast<int>(n);
    }

    auto parse_gate_app = [&](const Token& name_tok) -> GateApp {
        if (!is_known_gate(name_tok.text))
            throw UnknownGate("line " + std::to_string(name_tok.line) + ": unknown gate '" +
                              name_tok.text + "'");
        GateApp app;
        app.gate = name_tok.text;
        const int arity = gate_arity(app.gate);
        for (int k = 0; k < arity; ++k)
            app.qubits.push_back(parse_qubit(next("qubit reference"), circuit.n_qubits));
        for (std::size_t a = 0; a < app.qubits.size(); ++a)
            for (std::size_t b = a + 1; b < app.qubits.size(); ++b)
                if (app.qubits[a] == app.qubits[b])
                    throw BadIndex("line " + std::to_string(name_tok.line) +
                                   ": repeated qubit in gate operands");
        return app;
    };

    while (const Token* tok = peek()) {
        if (tok->text == "repeat") {
            const Token& kw = *tok;
            ++pos;
            const long long count = parse_count(next("repeat count"), "repeat count");
            if (count < 1) throw CircuitSyntaxError(kw.line, "repeat count must be >= 1");
            const Token& brace = next("'{'");
            if (brace.text != "{") throw CircuitSyntaxError(brace.line, "expected '{' after repeat");
            Instruction ins;
            ins.repeat = count;
            while (true) {
                const Token& inner = next("gate or '}'");
                if (inner.text == "}") break;
                if (inner.text == "repeat")
                    throw CircuitSyntaxError(inner.line, "repeat blocks cannot be nested");
                ins.body.push_back(parse_gate_app(inner));
            }
            if (ins.body.empty()) throw CircuitSyntaxError(kw.line, "empty repeat block");
            circuit.instructions.push_back(std::move(ins));
        } else if (tok->text == "}" || tok->text == "{") {
            throw CircuitSyntaxError(tok->line, "unexpected '" + tok->text + "'");
        } else if (tok->text == "qubits") {
            throw CircuitSyntaxError(tok->line, "duplicate 'qubits' declaration");
        } else {
            const Token& name_tok = *tok;
            ++pos;
            Instruction ins;
            ins.repeat = 1;
            ins.body.push_back(parse_gate_app(name_tok));
            circuit.instructions.push_back(std::move(ins));
        }
    }
    return circuit;
}

}  // namespace qslprobe
