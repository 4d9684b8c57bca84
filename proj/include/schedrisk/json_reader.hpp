#pragma once

// Minimal JSON reader that keeps the source position of every value and
// object key, so schema errors can point at the exact line and column.
// Strict RFC 8259 grammar; UTF-8 input is validated.

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

namespace schedrisk::json {

struct Position {
    std::size_t line = 1;
    std::size_t column = 1;
};

enum class Kind : std::uint8_t { Null, Bool, Number, String, Array, Object };

inline constexpr std::string_view kind_name(Kind k) {
    switch (k) {
        case Kind::Null: return "null";
        case Kind::Bool: return "boolean";
        case Kind::Number: return "number";
        case Kind::String: return "string";
        case Kind::Array: return "array";
        case Kind::Object: return "object";
    }
    return "?";
}

struct Member;

class Value {
public:
    Kind kind = Kind::Null;
    Position pos;
    bool boolean = false;
    double number = 0.0;
    std::string string;
    std::vector<Value> items;      // Kind::Array
    std::vector<Member> members;   // Kind::Object, document order, duplicates kept

    [[nodiscard]] bool is(Kind k) const noexcept { return kind == k; }
};

struct Member {
    std::string key;
    Position key_pos;
    Value value;
};

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(Position pos, const std::string& what) : std::runtime_error(what), pos_(pos) {}
    [[nodiscard]] Position position() const noexcept { return pos_; }

private:
    Position pos_;
};

namespace detail {

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    Value document() {
        skip_ws();
        Value v = value(0);
        skip_ws();
        if (!eof()) fail("unexpected trailing characters after document");
        return v;
    }

private:
    static constexpr int kMaxDepth = 64;

    std::string_view text_;
    std::size_t i_ = 0;
    Position pos_;

    [[nodiscard]] bool eof() const { return i_ >= text_.size(); }
    [[nodiscard]] char peek() const { return text_[i_]; }

    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(pos_, msg); }
    [[noreturn]] void fail_at(Position p, const std::string& msg) const { throw SyntaxError(p, msg); }

    void advance() {
        if (text_[i_] == '\n') {
            ++pos_.line;
            pos_.column = 1;
        } else {
            ++pos_.column;
        }
        ++i_;
    }

    void skip_ws() {
        while (!eof()) {
            const char c = peek();
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                advance();
            } else {
                break;
            }
        }
    }

    void expect(char c) {
        if (eof()) fail(std::string("expected '") + c + "' but reached end of input");
        if (peek() != c) fail(std::string("expected '") + c + "'");
        advance();
    }

    Value value(int depth) {
        if (depth > kMaxDepth) fail("nesting too deep");
        if (eof()) fail("unexpected end of input");
        switch (peek()) {
            case '{': return object(depth);
            case '[': return array(depth);
            case '"': {
                Value v;
                v.kind = Kind::String;
                v.pos = pos_;
                v.string = string_literal();
                return v;
            }
            case 't': return keyword("true", Kind::Bool, true);
            case 'f': return keyword("false", Kind::Bool, false);
            case 'n': return keyword("null", Kind::Null, false);
            default: break;
        }
        if (peek() == '-' || (peek() >= '0' && peek() <= '9')) return number();
        fail(std::string("unexpected character '") + printable(peek()) + "'");
    }

    static std::string printable(char c) {
        const auto u = static_cast<unsigned char>(c);
        if (u >= 0x20 && u < 0x7f) return std::string(1, c);
        static constexpr char kHex[] = "0123456789abcdef";
        return std::string("\\x") + kHex[u >> 4] + kHex[u & 0xf];
    }

    Value keyword(std::string_view word, Kind kind, bool b) {
        Value v;
        v.kind = kind;
        v.pos = pos_;
        v.boolean = b;
        if (text_.substr(i_, word.size()) != word) fail("invalid literal");
        for (std::size_t k = 0; k < word.size(); ++k) advance();
        return v;
    }

    Value number() {
        Value v;
        v.kind = Kind::Number;
        v.pos = pos_;
        const std::size_t start = i_;
        auto digits = [&] {
            std::size_t n = 0;
            while (!eof() && peek() >= '0' && peek() <= '9') {
                advance();
                ++n;
            }
            return n;
        };
        if (peek() == '-') advance();
        if (eof()) fail("incomplete number");
        if (peek() == '0') {
            advance();
        } else if (digits() == 0) {
            fail("invalid number");
        }
        if (!eof() && peek() == '.') {
            advance();
            if (digits() == 0) fail("expected digit after decimal point");
        }
        if (!eof() && (peek() == 'e' || peek() == 'E')) {
            advance();
            if (!eof() && (peek() == '+' || peek() == '-')) advance();
            if (digits() == 0) fail("expected digit in exponent");
        }
        const char* first = text_.data() + start;
        const char* last = text_.data() + i_;
        auto [ptr, ec] = std::from_chars(first, last, v.number);
        if (ec == std::errc::result_out_of_range) fail_at(v.pos, "number out of range");
        if (ec != std::errc() || ptr != last) fail_at(v.pos, "invalid number");
        return v;
    }

    unsigned hex4() {
        unsigned cp = 0;
        for (int k = 0; k < 4; ++k) {
            if (eof()) fail("incomplete unicode escape");
            const char c = peek();
            cp <<= 4;
            if (c >= '0' && c <= '9') {
                cp |= static_cast<unsigned>(c - '0');
            } else if (c >= 'a' && c <= 'f') {
                cp |= static_cast<unsigned>(c - 'a' + 10);
            } else if (c >= 'A' && c <= 'F') {
                cp |= static_cast<unsigned>(c - 'A' + 10);
            } else {
                fail("invalid hex digit in unicode escape");
            }
            advance();
        }
        return cp;
    }

    static void append_utf8(std::string& out, unsigned cp) {
        if (cp < 0x80) {
            out += static_cast<char>(cp);
        } else if (cp < 0x800) {
            out += static_cast<char>(0xc0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3f));
        } else if (cp < 0x10000) {
            out += static_cast<char>(0xe0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
            out += static_cast<char>(0x80 | (cp & 0x3f));
        } else {
            out += static_cast<char>(0xf0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3f));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
            out += static_cast<char>(0x80 | (cp & 0x3f));
        }
    }

    // Copies one multi-byte UTF-8 sequence starting at the current byte.
    void utf8_sequence(std::string& out) {
        const auto lead = static_cast<unsigned char>(peek());
        std::size_t len = 0;
        unsigned cp = 0;
        if ((lead & 0xe0) == 0xc0) {
            len = 2;
            cp = lead & 0x1f;
        } else if ((lead & 0xf0) == 0xe0) {
            len = 3;
            cp = lead & 0x0f;
        } else if ((lead & 0xf8) == 0xf0) {
            len = 4;
            cp = lead & 0x07;
        } else {
            fail("invalid UTF-8 lead byte");
        }
        if (i_ + len > text_.size()) fail("truncated UTF-8 sequence");
        for (std::size_t k = 1; k < len; ++k) {
            const auto b = static_cast<unsigned char>(text_[i_ + k]);
            if ((b & 0xc0) != 0x80) fail("invalid UTF-8 continuation byte");
            cp = (cp << 6) | (b & 0x3f);
        }
        const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
                              (len == 4 && cp < 0x10000);
        if (overlong || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) {
            fail("invalid UTF-8 code point");
        }
        out.append(text_.substr(i_, len));
        // A multi-byte sequence occupies one column.
        i_ += len;
        ++pos_.column;
    }

    std::string string_literal() {
        expect('"');
        std::string out;
        for (;;) {
            if (eof()) fail("unterminated string");
            const char c = peek();
            if (c == '"') {
                advance();
                return out;
            }
            if (static_cast<unsigned char>(c) < 0x20) fail("control character in string");
            if (static_cast<unsigned char>(c) >= 0x80) {
                utf8_sequence(out);
                continue;
            }
            if (c != '\\') {
                out += c;
                advance();
                continue;
            }
            advance();
            if (eof()) fail("unterminated escape sequence");
            const char e = peek();
            advance();
            switch (e) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case '/': out += '/'; break;
                case 'b': out += '\b'; break;
                case 'f': out += '\f'; break;
                case 'n': out += '\n'; break;
                case 'r': out += '\r'; break;
                case 't': out += '\t'; break;
                case 'u': {
                    unsigned cp = hex4();
                    if (cp >= 0xd800 && cp <= 0xdbff) {
                        if (text_.substr(i_, 2) != "\\u") fail("unpaired surrogate in unicode escape");
                        advance();
                        advance();
                        const unsigned lo = hex4();
                        if (lo < 0xdc00 || lo > 0xdfff) fail("invalid low surrogate in unicode escape");
                        cp = 0x10000 + ((cp - 0xd800) << 10) + (lo - 0xdc00);
                    } else if (cp >= 0xdc00 && cp <= 0xdfff) {
                        fail("unpaired surrogate in unicode escape");
                    }
                    append_utf8(out, cp);
                    break;
                }
                default: fail("invalid escape sequence");
            }
        }
    }

    Value array(int depth) {
        Value v;
        v.kind = Kind::Array;
        v.pos = pos_;
        expect('[');
        skip_ws();
        if (!eof() && peek() == ']') {
            advance();
            return v;
        }
        for (;;) {
            skip_ws();
            v.items.push_back(value(depth + 1));
            skip_ws();
            if (eof()) fail("unterminated array");
            if (peek() == ',') {
                advance();
                continue;
            }
            if (peek() == ']') {
                advance();
                return v;
            }
            fail("expected ',' or ']' in array");
        }
    }

    Value object(int depth) {
        Value v;
        v.kind = Kind::Object;
        v.pos = pos_;
        expect('{');
        skip_ws();
        if (!eof() && peek() == '}') {
            advance();
            return v;
        }
        for (;;) {
            skip_ws();
            if (eof()) fail("unterminated object");
            if (peek() != '"') fail("expected string key in object");
            Member m;
            m.key_pos = pos_;
            m.key = string_literal();
            skip_ws();
            expect(':');
            skip_ws();
            m.value = value(depth + 1);
            v.members.push_back(std::move(m));
            skip_ws();
            if (eof()) fail("unterminated object");
            if (peek() == ',') {
                advance();
                continue;
            }
            if (peek() == '}') {
                advance();
                return v;
            }
            fail("expected ',' or '}' in object");
        }
    }
};

}  // namespace detail

/// Parses a complete document. Throws SyntaxError carrying the position of
/// the first offending character.
inline Value parse(std::string_view text) { return detail::Reader(text).document(); }

}  // namespace schedrisk::json
