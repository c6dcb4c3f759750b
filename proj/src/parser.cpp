#include "plp/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>

namespace plp {

namespace {

enum class Tok {
    Ident,
    Int,      // raw digit text kept for qcase labels
    Real,
    KwDecl,
    KwCall,
    KwSkip,
    KwIf,
    KwThen,
    KwElse,
    KwQcase,
    KwOf,
    KwTrue,
    KwFalse,
    KwLam,
    KwPi,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    HalfMinus,  // [-]
    HalfPlus,   // [+]
    Comma,
    Semi,
    Dot,
    ColonColon,
    Arrow,      // ->
    StarEq,     // *=
    Backslash,
    Pipe,
    PipePipe,
    AmpAmp,
    Bang,
    Plus,
    Minus,
    Star,
    Slash,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourceSpan span;
};

const std::map<std::string, Tok, std::less<>> kKeywords = {
    {"decl", Tok::KwDecl}, {"call", Tok::KwCall}, {"skip", Tok::KwSkip}, {"if", Tok::KwIf},
    {"then", Tok::KwThen}, {"else", Tok::KwElse}, {"qcase", Tok::KwQcase}, {"of", Tok::KwOf},
    {"true", Tok::KwTrue}, {"false", Tok::KwFalse}, {"lam", Tok::KwLam}, {"pi", Tok::KwPi},
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skipTrivia();
            Token t = next();
            out.push_back(t);
            if (t.kind == Tok::End) break;
        }
        return out;
    }

private:
    std::string_view src_;
    std::uint32_t pos_ = 0;
    std::uint32_t line_ = 1;
    std::uint32_t col_ = 1;

    bool eof() const { return pos_ >= src_.size(); }
    char peek(std::uint32_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }
    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skipTrivia() {
        for (;;) {
            while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
            if (peek() == '/' && peek(1) == '/') {
                while (!eof() && peek() != '\n') advance();
                continue;
            }
            break;
        }
    }

    SourceSpan hereSpan() const { return SourceSpan{pos_, pos_, line_, col_}; }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(hereSpan(), msg); }

    Token make(Tok kind, SourceSpan start, std::string text = {}) {
        start.end = pos_;
        return Token{kind, std::move(text), start};
    }

    Token next() {
        SourceSpan start = hereSpan();
        if (eof()) return make(Tok::End, start);
        char c = peek();

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
                word.push_back(advance());
            }
            if (auto it = kKeywords.find(word); it != kKeywords.end()) {
                return make(it->second, start, std::move(word));
            }
            return make(Tok::Ident, start, std::move(word));
        }

        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) num.push_back(advance());
            if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
                num.push_back(advance());
                while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
                    num.push_back(advance());
                }
                return make(Tok::Real, start, std::move(num));
            }
            return make(Tok::Int, start, std::move(num));
        }

        advance();
        switch (c) {
            case '{': return make(Tok::LBrace, start);
            case '}': return make(Tok::RBrace, start);
            case '(': return make(Tok::LParen, start);
            case ')': return make(Tok::RParen, start);
            case '[':
                if (peek() == '-' && peek(1) == ']') {
                    advance();
                    advance();
                    return make(Tok::HalfMinus, start);
                }
                if (peek() == '+' && peek(1) == ']') {
                    advance();
                    advance();
                    return make(Tok::HalfPlus, start);
                }
                return make(Tok::LBracket, start);
            case ']': return make(Tok::RBracket, start);
            case ',': return make(Tok::Comma, start);
            case ';': return make(Tok::Semi, start);
            case '.': return make(Tok::Dot, start);
            case ':':
                if (peek() == ':') {
                    advance();
                    return make(Tok::ColonColon, start);
                }
                fail("unexpected ':'");
            case '-':
                if (peek() == '>') {
                    advance();
                    return make(Tok::Arrow, start);
                }
                return make(Tok::Minus, start);
            case '*':
                if (peek() == '=') {
                    advance();
                    return make(Tok::StarEq, start);
                }
                return make(Tok::Star, start);
            case '\\': return make(Tok::Backslash, start);
            case '|':
                if (peek() == '|') {
                    advance();
                    return make(Tok::PipePipe, start);
                }
                return make(Tok::Pipe, start);
            case '&':
                if (peek() == '&') {
                    advance();
                    return make(Tok::AmpAmp, start);
                }
                fail("unexpected '&' (use '&&')");
            case '!':
                if (peek() == '=') {
                    advance();
                    return make(Tok::NotEq, start);
                }
                return make(Tok::Bang, start);
            case '+': return make(Tok::Plus, start);
            case '/': return make(Tok::Slash, start);
            case '=':
                if (peek() == '=') {
                    advance();
                    return make(Tok::EqEq, start);
                }
                fail("unexpected '=' (use '==')");
            case '<':
                if (peek() == '=') {
                    advance();
                    return make(Tok::Le, start);
                }
                return make(Tok::Lt, start);
            case '>':
                if (peek() == '=') {
                    advance();
                    return make(Tok::Ge, start);
                }
                return make(Tok::Gt, start);
            default: break;
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

const char* tokenName(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::Int: return "integer";
        case Tok::Real: return "real number";
        case Tok::KwDecl: return "'decl'";
        case Tok::KwCall: return "'call'";
        case Tok::KwSkip: return "'skip'";
        case Tok::KwIf: return "'if'";
        case Tok::KwThen: return "'then'";
        case Tok::KwElse: return "'else'";
        case Tok::KwQcase: return "'qcase'";
        case Tok::KwOf: return "'of'";
        case Tok::KwTrue: return "'true'";
        case Tok::KwFalse: return "'false'";
        case Tok::KwLam: return "'lam'";
        case Tok::KwPi: return "'pi'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBracket: return "'['";
        case Tok::RBracket: return "']'";
        case Tok::HalfMinus: return "'[-]'";
        case Tok::HalfPlus: return "'[+]'";
        case Tok::Comma: return "','";
        case Tok::Semi: return "';'";
        case Tok::Dot: return "'.'";
        case Tok::ColonColon: return "'::'";
        case Tok::Arrow: return "'->'";
        case Tok::StarEq: return "'*='";
        case Tok::Backslash: return "'\\'";
        case Tok::Pipe: return "'|'";
        case Tok::PipePipe: return "'||'";
        case Tok::AmpAmp: return "'&&'";
        case Tok::Bang: return "'!'";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Star: return "'*'";
        case Tok::Slash: return "'/'";
        case Tok::EqEq: return "'=='";
        case Tok::NotEq: return "'!='";
        case Tok::Lt: return "'<'";
        case Tok::Le: return "'<='";
        case Tok::Gt: return "'>'";
        case Tok::Ge: return "'>='";
        case Tok::End: return "end of input";
    }
    return "?";
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    Program parse() {
        Program p;
        while (at(Tok::KwDecl)) {
            p.decls.push_back(parseDecl());
            match(Tok::Comma);  // separator between declarations is optional
        }
        expect(Tok::ColonColon, "'::' between declarations and the main statement");
        p.main = parseStmtSeq();
        expect(Tok::End, "end of input");
        p.vars = varOrder(*p.main);
        return p;
    }

private:
    std::vector<Token> toks_;
    std::size_t idx_ = 0;

    const Token& cur() const { return toks_[idx_]; }
    const Token& peek(std::size_t ahead = 1) const {
        return toks_[std::min(idx_ + ahead, toks_.size() - 1)];
    }
    bool at(Tok t) const { return cur().kind == t; }
    Token advance() { return toks_[idx_++]; }
    bool match(Tok t) {
        if (at(t)) {
            ++idx_;
            return true;
        }
        return false;
    }
    Token expect(Tok t, const std::string& what) {
        if (!at(t)) {
            throw ParseError(cur().span,
                             "expected " + what + ", found " + tokenName(cur().kind),
                             {tokenName(t)});
        }
        return advance();
    }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(cur().span, msg); }

    long long intValue(const Token& t) const { return std::strtoll(t.text.c_str(), nullptr, 10); }

    ProcDecl parseDecl() {
        SourceSpan span = cur().span;
        expect(Tok::KwDecl, "'decl'");
        Token name = expect(Tok::Ident, "procedure name");
        expect(Tok::LParen, "'('");
        std::vector<std::string> params;
        if (!at(Tok::RParen)) {
            params.push_back(expect(Tok::Ident, "parameter name").text);
            while (match(Tok::Comma)) {
                params.push_back(expect(Tok::Ident, "parameter name").text);
            }
        }
        expect(Tok::RParen, "')'");
        expect(Tok::LBrace, "'{'");
        StatementPtr body = parseStmtSeq();
        expect(Tok::RBrace, "'}'");
        return ProcDecl{name.text, std::move(params), std::move(body), span};
    }

    bool atStatementStart() const {
        switch (cur().kind) {
            case Tok::KwSkip:
            case Tok::KwIf:
            case Tok::KwQcase:
            case Tok::KwCall:
            case Tok::Ident:
                return true;
            default:
                return false;
        }
    }

    StatementPtr parseStmtSeq() {
        SourceSpan span = cur().span;
        std::vector<StatementPtr> items;
        items.push_back(parseStatement());
        while (atStatementStart()) items.push_back(parseStatement());
        if (items.size() == 1) return items.front();
        auto seq = std::make_shared<Statement>(Statement{Seq{std::move(items)}, span});
        return seq;
    }

    StatementPtr parseStatement() {
        SourceSpan span = cur().span;
        switch (cur().kind) {
            case Tok::KwSkip: {
                advance();
                expect(Tok::Semi, "';'");
                return std::make_shared<Statement>(Statement{Skip{}, span});
            }
            case Tok::KwIf: {
                advance();
                BoolExprPtr cond = parseBool();
                expect(Tok::KwThen, "'then'");
                expect(Tok::LBrace, "'{'");
                StatementPtr thenBranch = parseStmtSeq();
                expect(Tok::RBrace, "'}'");
                expect(Tok::KwElse, "'else'");
                expect(Tok::LBrace, "'{'");
                StatementPtr elseBranch = parseStmtSeq();
                expect(Tok::RBrace, "'}'");
                return std::make_shared<Statement>(
                    Statement{If{std::move(cond), std::move(thenBranch), std::move(elseBranch)},
                              span});
            }
            case Tok::KwQcase: return parseQCase();
            case Tok::KwCall: {
                advance();
                Token name = expect(Tok::Ident, "procedure name");
                expect(Tok::LParen, "'('");
                std::vector<ListExprPtr> args;
                if (!at(Tok::RParen)) {
                    args.push_back(parseListExpr());
                    while (match(Tok::Comma)) args.push_back(parseListExpr());
                }
                expect(Tok::RParen, "')'");
                expect(Tok::Semi, "';'");
                return std::make_shared<Statement>(
                    Statement{Call{name.text, std::move(args)}, span});
            }
            case Tok::Ident: {
                if (peek().kind == Tok::LParen) {
                    return parseGateMacro();
                }
                QubitExpr target = parseQubitExpr();
                expect(Tok::StarEq, "'*='");
                return parseApplyTail(std::move(target), span);
            }
            default:
                fail("expected a statement, found " + std::string(tokenName(cur().kind)));
        }
    }

    StatementPtr parseGateMacro() {
        SourceSpan span = cur().span;
        Token name = expect(Tok::Ident, "gate macro");
        GateMacro::Kind kind;
        std::size_t arity;
        if (name.text == "CNOT") {
            kind = GateMacro::Cnot;
            arity = 2;
        } else if (name.text == "SWAP") {
            kind = GateMacro::Swap;
            arity = 2;
        } else if (name.text == "TOF") {
            kind = GateMacro::Tof;
            arity = 3;
        } else {
            throw ParseError(name.span, "unknown statement '" + name.text +
                                            "' (expected CNOT, SWAP, TOF or a qubit expression)");
        }
        expect(Tok::LParen, "'('");
        std::vector<QubitExpr> args;
        args.push_back(parseQubitExpr());
        while (match(Tok::Comma)) args.push_back(parseQubitExpr());
        expect(Tok::RParen, "')'");
        expect(Tok::Semi, "';'");
        if (args.size() != arity) {
            throw ParseError(name.span, name.text + " takes " + std::to_string(arity) +
                                            " qubit arguments");
        }
        return std::make_shared<Statement>(Statement{GateMacro{kind, std::move(args)}, span});
    }

    StatementPtr parseApplyTail(QubitExpr target, SourceSpan span) {
        Token gate = expect(Tok::Ident, "gate name (NOT, Ph or RY)");
        GateName g;
        if (gate.text == "NOT") {
            g = GateName::Not;
        } else if (gate.text == "Ph") {
            g = GateName::Ph;
        } else if (gate.text == "RY") {
            g = GateName::RY;
        } else {
            throw ParseError(gate.span, "unknown gate '" + gate.text + "'");
        }
        std::optional<AngleFn> angle;
        if (match(Tok::LBracket)) {
            expect(Tok::KwLam, "'lam'");
            Token param = expect(Tok::Ident, "angle parameter");
            expect(Tok::Dot, "'.'");
            AngleExprPtr body = parseAngleExpr(param.text);
            expect(Tok::RBracket, "']'");
            angle = AngleFn{param.text, std::move(body)};
        }
        IntExprPtr arg;
        if (match(Tok::LParen)) {
            arg = parseIntExpr();
            expect(Tok::RParen, "')'");
        }
        expect(Tok::Semi, "';'");
        return std::make_shared<Statement>(
            Statement{Apply{std::move(target), g, std::move(angle), std::move(arg)}, span});
    }

    StatementPtr parseQCase() {
        SourceSpan span = cur().span;
        expect(Tok::KwQcase, "'qcase'");
        std::vector<QubitExpr> controls;
        controls.push_back(parseQubitExpr());
        while (match(Tok::Comma)) controls.push_back(parseQubitExpr());
        expect(Tok::KwOf, "'of'");
        expect(Tok::LBrace, "'{'");
        std::size_t k = controls.size();
        std::size_t count = std::size_t{1} << k;
        std::vector<StatementPtr> branches;
        for (std::size_t b = 0; b < count; ++b) {
            std::string expected;
            for (std::size_t bit = k; bit-- > 0;) {
                expected.push_back((b >> bit) & 1 ? '1' : '0');
            }
            Token label = expect(Tok::Int, "branch label '" + expected + "'");
            if (label.text != expected) {
                throw ParseError(label.span, "expected branch label '" + expected + "', found '" +
                                                 label.text + "' (branches follow binary counting order)");
            }
            expect(Tok::Arrow, "'->'");
            branches.push_back(parseStmtSeq());
            if (b + 1 < count) {
                expect(Tok::Comma, "',' between qcase branches");
            } else {
                match(Tok::Comma);  // tolerate a trailing comma
            }
        }
        expect(Tok::RBrace, "'}'");
        if (k == 1) {
            return std::make_shared<Statement>(
                Statement{QCase{controls[0], branches[0], branches[1]}, span});
        }
        return std::make_shared<Statement>(
            Statement{QCaseMulti{std::move(controls), std::move(branches)}, span});
    }

    // listExpr := IDENT { '[-]' | '[+]' | '\' '[' indices ']' }
    ListExprPtr parseListExpr() {
        SourceSpan span = cur().span;
        Token name = expect(Tok::Ident, "qubit list variable");
        ListExprPtr cur_ = std::make_shared<ListExpr>(ListExpr{QVar{name.text}, name.span});
        for (;;) {
            if (match(Tok::HalfMinus)) {
                cur_ = std::make_shared<ListExpr>(ListExpr{FirstHalf{cur_}, span});
            } else if (match(Tok::HalfPlus)) {
                cur_ = std::make_shared<ListExpr>(ListExpr{SecondHalf{cur_}, span});
            } else if (at(Tok::Backslash)) {
                advance();
                expect(Tok::LBracket, "'['");
                cur_ = parseRemoveTail(std::move(cur_), span);
            } else {
                break;
            }
        }
        return cur_;
    }

    ListExprPtr parseRemoveTail(ListExprPtr base, SourceSpan span) {
        // Lookahead decides between a single arbitrary index and a literal
        // multi-removal.
        bool firstIsLiteral =
            at(Tok::Int) || (at(Tok::Minus) && peek().kind == Tok::Int);
        std::size_t after = at(Tok::Minus) ? 2 : 1;
        bool multi = firstIsLiteral && peek(after).kind == Tok::Comma;
        if (!multi) {
            IntExprPtr idx = parseIndexExpr();
            expect(Tok::RBracket, "']'");
            return std::make_shared<ListExpr>(ListExpr{Remove{std::move(base), std::move(idx)}, span});
        }
        std::vector<long long> indices;
        indices.push_back(parseLiteralIndex());
        while (match(Tok::Comma)) indices.push_back(parseLiteralIndex());
        expect(Tok::RBracket, "']'");
        bool anyNeg = false, anyPos = false;
        for (long long v : indices) (v < 0 ? anyNeg : anyPos) = true;
        if (anyNeg && anyPos) {
            throw ParseError(span, "multi-removal indices must all have the same sign");
        }
        return std::make_shared<ListExpr>(
            ListExpr{MultiRemove{std::move(base), std::move(indices)}, span});
    }

    long long parseLiteralIndex() {
        bool neg = match(Tok::Minus);
        Token t = expect(Tok::Int, "literal removal index");
        long long v = intValue(t);
        return neg ? -v : v;
    }

    // An index position additionally accepts the sugar '-n'.
    IntExprPtr parseIndexExpr() {
        if (at(Tok::Minus)) {
            SourceSpan span = cur().span;
            advance();
            Token t = expect(Tok::Int, "integer after '-'");
            return std::make_shared<IntExpr>(IntExpr{IntConst{-intValue(t)}, span});
        }
        return parseIntExpr();
    }

    QubitExpr parseQubitExpr() {
        SourceSpan span = cur().span;
        ListExprPtr list = parseListExpr();
        expect(Tok::LBracket, "'[' (qubit index)");
        IntExprPtr idx = parseIndexExpr();
        expect(Tok::RBracket, "']'");
        return QubitExpr{std::move(list), std::move(idx), span};
    }

    // intExpr := atom { ('+'|'-') INT | '/' 2 }
    IntExprPtr parseIntExpr() {
        SourceSpan span = cur().span;
        IntExprPtr e = parseIntAtom();
        for (;;) {
            if (at(Tok::Plus) || at(Tok::Minus)) {
                bool neg = at(Tok::Minus);
                advance();
                Token k = expect(Tok::Int, "integer constant after '+'/'-'");
                long long delta = intValue(k);
                e = std::make_shared<IntExpr>(IntExpr{AddConst{e, neg ? -delta : delta}, span});
            } else if (at(Tok::Slash)) {
                advance();
                Token two = expect(Tok::Int, "'2' (the only divisor is 2)");
                if (two.text != "2") {
                    throw ParseError(two.span, "only division by 2 is supported");
                }
                e = std::make_shared<IntExpr>(IntExpr{HalfCeil{e}, span});
            } else {
                break;
            }
        }
        return e;
    }

    IntExprPtr parseIntAtom() {
        SourceSpan span = cur().span;
        if (at(Tok::Int)) {
            Token t = advance();
            return std::make_shared<IntExpr>(IntExpr{IntConst{intValue(t)}, span});
        }
        if (at(Tok::Pipe)) {
            advance();
            ListExprPtr l = parseListExpr();
            expect(Tok::Pipe, "closing '|'");
            return std::make_shared<IntExpr>(IntExpr{SizeOf{std::move(l)}, span});
        }
        if (at(Tok::LParen)) {
            advance();
            IntExprPtr e = parseIntExpr();
            expect(Tok::RParen, "')'");
            return e;
        }
        if (at(Tok::Ident)) {
            Token t = advance();
            return std::make_shared<IntExpr>(IntExpr{IntVar{t.text}, span});
        }
        fail("expected an integer expression");
    }

    // boolOr := boolAnd { '||' boolAnd }
    BoolExprPtr parseBool() {
        SourceSpan span = cur().span;
        BoolExprPtr lhs = parseBoolAnd();
        while (match(Tok::PipePipe)) {
            BoolExprPtr rhs = parseBoolAnd();
            lhs = std::make_shared<BoolExpr>(BoolExpr{BoolOr{lhs, rhs}, span});
        }
        return lhs;
    }

    BoolExprPtr parseBoolAnd() {
        SourceSpan span = cur().span;
        BoolExprPtr lhs = parseBoolNot();
        while (match(Tok::AmpAmp)) {
            BoolExprPtr rhs = parseBoolNot();
            lhs = std::make_shared<BoolExpr>(BoolExpr{BoolAnd{lhs, rhs}, span});
        }
        return lhs;
    }

    BoolExprPtr parseBoolNot() {
        SourceSpan span = cur().span;
        if (match(Tok::Bang)) {
            return std::make_shared<BoolExpr>(BoolExpr{BoolNot{parseBoolNot()}, span});
        }
        return parseBoolAtom();
    }

    BoolExprPtr parseBoolAtom() {
        SourceSpan span = cur().span;
        if (match(Tok::KwTrue)) {
            return std::make_shared<BoolExpr>(BoolExpr{BoolLit{true}, span});
        }
        if (match(Tok::KwFalse)) {
            return std::make_shared<BoolExpr>(BoolExpr{BoolLit{false}, span});
        }
        if (at(Tok::LParen)) {
            // '(' may open a parenthesized boolean or an integer comparison;
            // try the boolean reading first and fall back.
            std::size_t save = idx_;
            advance();
            try {
                BoolExprPtr inner = parseBool();
                expect(Tok::RParen, "')'");
                return inner;
            } catch (const ParseError&) {
                idx_ = save;
            }
        }
        IntExprPtr lhs = parseIntExpr();
        CmpOp op;
        if (match(Tok::EqEq)) {
            op = CmpOp::Eq;
        } else if (match(Tok::NotEq)) {
            op = CmpOp::Ne;
        } else if (match(Tok::Le)) {
            op = CmpOp::Le;
        } else if (match(Tok::Lt)) {
            op = CmpOp::Lt;
        } else if (match(Tok::Ge)) {
            op = CmpOp::Ge;
        } else if (match(Tok::Gt)) {
            op = CmpOp::Gt;
        } else {
            fail("expected a comparison operator");
        }
        IntExprPtr rhs = parseIntExpr();
        return std::make_shared<BoolExpr>(BoolExpr{Cmp{std::move(lhs), op, std::move(rhs)}, span});
    }

    // angle := term { ('+'|'-') term }; term := factor { ('*'|'/') factor }
    AngleExprPtr parseAngleExpr(const std::string& param) {
        SourceSpan span = cur().span;
        AngleExprPtr lhs = parseAngleTerm(param);
        for (;;) {
            if (match(Tok::Plus)) {
                lhs = std::make_shared<AngleExpr>(
                    AngleExpr{AngleBin{AngleBinOp::Add, lhs, parseAngleTerm(param)}, span});
            } else if (match(Tok::Minus)) {
                lhs = std::make_shared<AngleExpr>(
                    AngleExpr{AngleBin{AngleBinOp::Sub, lhs, parseAngleTerm(param)}, span});
            } else {
                break;
            }
        }
        return lhs;
    }

    AngleExprPtr parseAngleTerm(const std::string& param) {
        SourceSpan span = cur().span;
        AngleExprPtr lhs = parseAngleFactor(param);
        for (;;) {
            if (match(Tok::Star)) {
                lhs = std::make_shared<AngleExpr>(
                    AngleExpr{AngleBin{AngleBinOp::Mul, lhs, parseAngleFactor(param)}, span});
            } else if (match(Tok::Slash)) {
                lhs = std::make_shared<AngleExpr>(
                    AngleExpr{AngleBin{AngleBinOp::Div, lhs, parseAngleFactor(param)}, span});
            } else {
                break;
            }
        }
        return lhs;
    }

    AngleExprPtr parseAngleFactor(const std::string& param) {
        SourceSpan span = cur().span;
        if (match(Tok::Minus)) {
            return std::make_shared<AngleExpr>(AngleExpr{AngleNeg{parseAngleFactor(param)}, span});
        }
        if (at(Tok::Int)) {
            Token t = advance();
            return std::make_shared<AngleExpr>(AngleExpr{AngleIntLit{intValue(t)}, span});
        }
        if (at(Tok::Real)) {
            Token t = advance();
            return std::make_shared<AngleExpr>(
                AngleExpr{AngleRealLit{std::strtod(t.text.c_str(), nullptr)}, span});
        }
        if (match(Tok::KwPi)) {
            return std::make_shared<AngleExpr>(AngleExpr{AnglePi{}, span});
        }
        if (at(Tok::Ident)) {
            Token t = advance();
            if (t.text != param) {
                throw ParseError(t.span, "unknown name '" + t.text +
                                             "' in angle expression (parameter is '" + param + "')");
            }
            return std::make_shared<AngleExpr>(AngleExpr{AngleParam{}, span});
        }
        if (at(Tok::LParen)) {
            advance();
            AngleExprPtr inner = parseAngleExpr(param);
            expect(Tok::RParen, "')'");
            return inner;
        }
        fail("expected an angle expression");
    }
};

}  // namespace

Program parseProgram(std::string_view source) {
    Lexer lexer(source);
    Parser parser(lexer.run());
    return parser.parse();
}

}  // namespace plp
