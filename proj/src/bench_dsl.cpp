#include "qimsim/bench_dsl.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qimsim {

namespace {

struct Token {
    std::string text;
    int line = 0;
    int col = 0;
};

struct ParseFailure {
    ParseError error;
};

[[noreturn]] void fail(const Token& at, const std::string& message) {
    throw ParseFailure{ParseError{at.line, at.col, message, at.text}};
}

std::vector<std::vector<Token>> tokenize(std::string_view text) {
    std::vector<std::vector<Token>> lines;
    std::vector<Token> current;
    int line_no = 1;
    size_t line_start = 0;
    size_t i = 0;
    while (i <= text.size()) {
        if (i == text.size() || text[i] == '\n') {
            if (!current.empty()) lines.push_back(std::move(current));
            current.clear();
            ++line_no;
            ++i;
            line_start = i;
            continue;
        }
        char ch = text[i];
        if (ch == '#') {  // comment to end of line
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        if (ch == ' ' || ch == '\t' || ch == '\r') {
            ++i;
            continue;
        }
        size_t start = i;
        if (ch == '=' || ch == ':') {
            ++i;
        } else {
            while (i < text.size()) {
                char c = text[i];
                if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '#' ||
                    c == '=' || c == ':')
                    break;
                ++i;
            }
        }
        current.push_back(Token{std::string(text.substr(start, i - start)), line_no,
                                static_cast<int>(start - line_start) + 1});
    }
    return lines;
}

class LineCursor {
  public:
    explicit LineCursor(const std::vector<Token>& tokens) : tokens_(tokens) {}

    bool done() const { return pos_ >= tokens_.size(); }
    const Token& last() const { return tokens_[tokens_.size() - 1]; }
    const Token& peek() const {
        if (done()) fail(last(), "unexpected end of statement");
        return tokens_[pos_];
    }
    Token next() {
        const Token& t = peek();
        ++pos_;
        return t;
    }
    Token expect(std::string_view literal) {
        if (done())
            fail(last(),
                 "expected '" + std::string(literal) + "' before end of statement");
        const Token& t = tokens_[pos_];
        if (t.text != literal)
            fail(t, "expected '" + std::string(literal) + "'");
        ++pos_;
        return t;
    }
    bool accept(std::string_view literal) {
        if (!done() && tokens_[pos_].text == literal) {
            ++pos_;
            return true;
        }
        return false;
    }

  private:
    const std::vector<Token>& tokens_;
    size_t pos_ = 0;
};

double parse_number(const Token& t) {
    const char* begin = t.text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + t.text.size() || t.text.empty())
        fail(t, "expected a number");
    if (!std::isfinite(v)) fail(t, "number out of range");
    return v;
}

long parse_integer(const Token& t) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size())
        fail(t, "expected an integer");
    return v;
}

double keyed_number(LineCursor& cur, std::string_view key) {
    cur.expect(key);
    cur.expect("=");
    return parse_number(cur.next());
}

double positive_keyed_number(LineCursor& cur, std::string_view key,
                             const std::string& what) {
    cur.expect(key);
    cur.expect("=");
    Token t = cur.next();
    double v = parse_number(t);
    if (!(v > 0.0)) fail(t, what + " must be positive");
    return v;
}

DslMask parse_mask(LineCursor& cur) {
    DslMask mask;
    Token kind = cur.next();
    if (kind.text == "double_slit") {
        mask.kind = DslMask::Kind::double_slit;
        mask.d = positive_keyed_number(cur, "d", "slit separation");
        mask.a = positive_keyed_number(cur, "a", "slit width");
        if (mask.a >= mask.d) fail(kind, "slit width must be smaller than separation");
    } else if (kind.text == "single_slit") {
        mask.kind = DslMask::Kind::single_slit;
        mask.a = positive_keyed_number(cur, "a", "slit width");
    } else if (kind.text == "file") {
        mask.kind = DslMask::Kind::file;
        cur.expect("=");
        Token path = cur.next();
        mask.path = path.text;
    } else {
        fail(kind, "expected a mask kind (double_slit | single_slit | file)");
    }
    return mask;
}

DslArm parse_arm(LineCursor& cur, const Token& arm_name,
                 const ParseOptions& opts) {
    DslArm arm;
    bool have_detector = false;
    while (!cur.done()) {
        Token t = cur.next();
        if (t.text == "free") {
            arm.elements.push_back(
                {DslElement::Kind::free,
                 positive_keyed_number(cur, "d", "free-space distance"), {}});
        } else if (t.text == "lens") {
            cur.expect("f");
            cur.expect("=");
            Token ft = cur.next();
            double f = parse_number(ft);
            if (f == 0.0 || (f < 0.0 && !opts.allow_diverging_lens))
                fail(ft,
                     "focal length must be nonzero; negative allowed only with "
                     "flag --allow-diverging");
            arm.elements.push_back({DslElement::Kind::lens, f, {}});
        } else if (t.text == "mask") {
            DslElement e;
            e.kind = DslElement::Kind::mask;
            e.mask = parse_mask(cur);
            arm.elements.push_back(e);
        } else if (t.text == "pupil") {
            arm.elements.push_back(
                {DslElement::Kind::pupil,
                 positive_keyed_number(cur, "A", "pupil area scale"), {}});
        } else if (t.text == "detector") {
            Token kind = cur.next();
            if (kind.text == "bucket") {
                arm.detector.kind = DslDetector::Kind::bucket;
                arm.detector.amplitude = cur.accept("amplitude");
            } else if (kind.text == "array") {
                arm.detector.kind = DslDetector::Kind::array;
                arm.detector.min = keyed_number(cur, "min");
                arm.detector.max = keyed_number(cur, "max");
                cur.expect("n");
                cur.expect("=");
                Token nt = cur.next();
                long n = parse_integer(nt);
                if (n < 2) fail(nt, "detector array needs at least 2 samples");
                arm.detector.n = static_cast<int>(n);
                if (!(arm.detector.max > arm.detector.min))
                    fail(nt, "detector array needs max > min");
            } else if (kind.text == "farfield_point") {
                arm.detector.kind = DslDetector::Kind::farfield_point;
            } else {
                fail(kind, "expected a detector kind (bucket | array | farfield_point)");
            }
            have_detector = true;
            if (!cur.done()) fail(cur.peek(), "detector must end the arm");
        } else {
            fail(t, "expected an element (free | lens | mask | pupil) or detector");
        }
    }
    if (!have_detector)
        fail(arm_name,
             std::string("arm ") + arm_name.text + " must end in a detector");
    if (arm.elements.empty())
        fail(arm_name, std::string("arm ") + arm_name.text +
                           " needs at least one element before the detector");
    return arm;
}

}  // namespace

ParseResult parse_bench(std::string_view text, const ParseOptions& opts) {
    try {
        auto lines = tokenize(text);
        if (lines.empty())
            return ParseError{1, 1, "empty bench: expected 'pump wavelength_nm = NUM'",
                              ""};

        BenchModel model;
        Token header_tok = lines[0][0];
        {
            LineCursor cur(lines[0]);
            cur.expect("pump");
            Token key = cur.peek();
            cur.expect("wavelength_nm");
            cur.expect("=");
            Token vt = cur.next();
            double v = parse_number(vt);
            if (!(v > 0.0)) fail(vt, "pump wavelength must be positive");
            model.pump_wavelength_nm = v;
            if (!cur.done()) fail(cur.peek(), "one statement per line");
            (void)key;
        }

        bool have_source = false, have_a = false, have_b = false;
        for (size_t li = 1; li < lines.size(); ++li) {
            LineCursor cur(lines[li]);
            Token head = cur.next();
            if (head.text == "source") {
                if (have_source) fail(head, "duplicate source statement");
                have_source = true;
                Token kind = cur.next();
                if (kind.text == "spdc") {
                    model.source = SourceKind::spdc;
                } else if (kind.text == "classical") {
                    model.source = SourceKind::classical;
                    cur.expect("epsilon");
                    cur.expect("=");
                    Token et = cur.next();
                    model.epsilon = parse_number(et);
                    if (model.epsilon == 0.0) fail(et, "epsilon must be nonzero");
                } else if (kind.text == "randomphase") {
                    model.source = SourceKind::randomphase;
                } else {
                    fail(kind, "expected a source kind (spdc | classical | randomphase)");
                }
                while (!cur.done()) {
                    Token key = cur.next();
                    cur.expect("=");
                    Token vt = cur.next();
                    if (key.text == "pmax") {
                        model.grid.p_max = parse_number(vt);
                        if (!(model.grid.p_max > 0.0)) fail(vt, "pmax must be positive");
                    } else if (key.text == "modes") {
                        long v = parse_integer(vt);
                        if (v < 2) fail(vt, "modes must be at least 2");
                        model.grid.modes = static_cast<int>(v);
                    } else if (key.text == "grid_n") {
                        long v = parse_integer(vt);
                        if (v < 64) fail(vt, "grid_n must be at least 64");
                        model.grid.n = static_cast<int>(v);
                    } else if (key.text == "extent") {
                        model.grid.extent = parse_number(vt);
                        if (!(model.grid.extent > 0.0))
                            fail(vt, "extent must be positive");
                    } else if (key.text == "seed") {
                        long v = parse_integer(vt);
                        if (v < 0) fail(vt, "seed must be nonnegative");
                        model.seed = static_cast<std::uint64_t>(v);
                    } else {
                        fail(key,
                             "unknown source option (pmax | modes | grid_n | extent "
                             "| seed)");
                    }
                }
            } else if (head.text == "arm") {
                Token name = cur.next();
                if (name.text != "A" && name.text != "B")
                    fail(name, "expected arm name A or B");
                cur.expect(":");
                DslArm arm = parse_arm(cur, name, opts);
                if (name.text == "A") {
                    if (have_a) fail(name, "duplicate arm A");
                    have_a = true;
                    model.arm_a = std::move(arm);
                } else {
                    if (have_b) fail(name, "duplicate arm B");
                    have_b = true;
                    model.arm_b = std::move(arm);
                }
            } else {
                fail(head, "expected 'source' or 'arm'");
            }
        }
        if (!have_source)
            fail(header_tok, "bench must declare a source");
        if (!have_a) fail(header_tok, "bench must declare arm A");
        if (!have_b) fail(header_tok, "bench must declare arm B");
        return model;
    } catch (const ParseFailure& f) {
        return f.error;
    }
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

void print_arm(std::ostringstream& out, const char* name, const DslArm& arm) {
    out << "arm " << name << ":";
    for (const DslElement& e : arm.elements) {
        switch (e.kind) {
            case DslElement::Kind::free:
                out << " free d=" << fmt_double(e.value);
                break;
            case DslElement::Kind::lens:
                out << " lens f=" << fmt_double(e.value);
                break;
            case DslElement::Kind::pupil:
                out << " pupil A=" << fmt_double(e.value);
                break;
            case DslElement::Kind::mask:
                out << " mask";
                switch (e.mask.kind) {
                    case DslMask::Kind::double_slit:
                        out << " double_slit d=" << fmt_double(e.mask.d)
                            << " a=" << fmt_double(e.mask.a);
                        break;
                    case DslMask::Kind::single_slit:
                        out << " single_slit a=" << fmt_double(e.mask.a);
                        break;
                    case DslMask::Kind::file:
                        out << " file=" << e.mask.path;
                        break;
                }
                break;
        }
    }
    out << " detector ";
    switch (arm.detector.kind) {
        case DslDetector::Kind::bucket:
            out << "bucket";
            if (arm.detector.amplitude) out << " amplitude";
            break;
        case DslDetector::Kind::array:
            out << "array min=" << fmt_double(arm.detector.min)
                << " max=" << fmt_double(arm.detector.max)
                << " n=" << arm.detector.n;
            break;
        case DslDetector::Kind::farfield_point:
            out << "farfield_point";
            break;
    }
    out << "\n";
}

}  // namespace

std::string print_bench(const BenchModel& model) {
    std::ostringstream out;
    out << "pump wavelength_nm=" << fmt_double(model.pump_wavelength_nm) << "\n";
    out << "source ";
    switch (model.source) {
        case SourceKind::spdc: out << "spdc"; break;
        case SourceKind::classical:
            out << "classical epsilon=" << fmt_double(model.epsilon);
            break;
        case SourceKind::randomphase: out << "randomphase"; break;
    }
    out << " pmax=" << fmt_double(model.grid.p_max) << " modes=" << model.grid.modes
        << " grid_n=" << model.grid.n << " extent=" << fmt_double(model.grid.extent)
        << " seed=" << model.seed << "\n";
    print_arm(out, "A", model.arm_a);
    print_arm(out, "B", model.arm_b);
    return out.str();
}

ParseResult parse_bench_file(const std::string& path, const ParseOptions& opts) {
    std::ifstream in(path);
    if (!in) return ParseError{1, 1, "cannot read bench file: " + path, ""};
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_bench(ss.str(), opts);
}

}  // namespace qimsim
