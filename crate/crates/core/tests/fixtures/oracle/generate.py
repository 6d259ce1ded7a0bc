"""Regenerates snippets.json from radon 6.0.1.

    python3 generate.py > snippets.json

Hand-written cases come from handwritten.py; the rest are drawn from a
seeded random program generator. Output is committed; the Rust tests
never call Python.
"""
import json
import random
import sys
import warnings

import radon
from radon.complexity import cc_visit
from radon.metrics import h_visit, mi_visit
from radon.raw import analyze
from radon.visitors import ComplexityVisitor

sys.dont_write_bytecode = True
from handwritten import CASES  # noqa: E402

SEED = 20240611
RANDOM_CASES = 180

NAMES = ["a", "b", "c", "n", "i", "j", "x", "y", "total", "items", "arr", "key", "value"]
BINOPS = ["+", "-", "*", "/", "//", "%", "**", "<<", ">>", "&", "|", "^", "@"]
CMPOPS = ["<", "<=", ">", ">=", "==", "!=", "in", "not in", "is", "is not"]
AUGOPS = ["+=", "-=", "*=", "/=", "//=", "%=", "|=", "&=", "^=", ">>=", "<<=", "**="]
CONSTS = ["0", "1", "2", "1.0", "2.5", "True", "False", "None", "'a'", "'x'", '"s"', "b'a'",
          "0x1f", "3j", "0j", "1e3", "...", "100", "'''t'''"]


class Gen:
    def __init__(self, rng):
        self.r = rng
        self.fn_count = 0

    def name(self):
        return self.r.choice(NAMES)

    def atom(self):
        k = self.r.random()
        if k < 0.45:
            return self.name()
        if k < 0.75:
            return self.r.choice(CONSTS)
        if k < 0.85:
            return "%s.%s" % (self.name(), self.r.choice(["size", "x", "value", "a"]))
        if k < 0.92:
            return "%s[%s]" % (self.name(), self.r.choice(["0", "i", "i + 1", "1:", "::2"]))
        return "%s(%s)" % (self.r.choice(["len", "f", "range", "abs"]), self.name())

    def expr(self, depth=0):
        if depth > 2 or self.r.random() < 0.3:
            return self.atom()
        k = self.r.random()
        if k < 0.35:
            return "%s %s %s" % (self.expr(depth + 1), self.r.choice(BINOPS), self.expr(depth + 1))
        if k < 0.45:
            return "%s%s" % (self.r.choice(["-", "+", "~", "not "]), self.expr(depth + 1))
        if k < 0.55:
            op = self.r.choice(["and", "or"])
            return (" %s " % op).join(self.expr(depth + 1) for _ in range(self.r.randint(2, 3)))
        if k < 0.65:
            parts = [self.expr(depth + 1)]
            for _ in range(self.r.randint(1, 2)):
                parts += [self.r.choice(CMPOPS), self.expr(depth + 1)]
            return " ".join(parts)
        if k < 0.72:
            return "(%s if %s else %s)" % (self.expr(depth + 1), self.expr(depth + 1), self.expr(depth + 1))
        if k < 0.80:
            ifs = "".join(" if %s" % self.expr(depth + 1) for _ in range(self.r.randint(0, 2)))
            open_, close = self.r.choice([("[", "]"), ("{", "}"), ("(", ")")])
            return "%s%s for %s in %s%s%s" % (open_, self.expr(depth + 1), self.name(), self.name(), ifs, close)
        if k < 0.85:
            return "lambda %s: %s" % (self.name(), self.expr(depth + 1))
        if k < 0.90:
            return "f'{%s}-{%s!r:>4}'" % (self.name(), self.expr(depth + 2))
        if k < 0.95:
            return "[%s, %s]" % (self.expr(depth + 1), self.expr(depth + 1))
        return "(%s)" % self.expr(depth + 1)

    def simple(self):
        k = self.r.random()
        if k < 0.35:
            return "%s = %s" % (self.name(), self.expr())
        if k < 0.50:
            return "%s %s %s" % (self.name(), self.r.choice(AUGOPS), self.expr())
        if k < 0.60:
            return "return %s" % self.expr()
        if k < 0.68:
            return "assert %s" % self.expr()
        if k < 0.76:
            return "print(%s)" % self.expr()
        if k < 0.80:
            return "pass"
        if k < 0.84:
            return "%s = %s; %s = %s" % (self.name(), self.expr(), self.name(), self.expr())
        if k < 0.88:
            return "%s: int = %s" % (self.name(), self.expr())
        return self.expr()

    def block(self, depth, indent):
        lines = []
        for _ in range(self.r.randint(1, 3)):
            lines += self.stmt(depth, indent)
        return lines

    def stmt(self, depth, indent):
        pad = "    " * indent
        k = self.r.random()
        if depth > 2 or k < 0.45:
            out = [pad + self.simple()]
            if self.r.random() < 0.12:
                out[0] += "  # note"
            if self.r.random() < 0.08:
                out.insert(0, pad + "# comment")
            if self.r.random() < 0.05:
                out.append("")
            return out
        body = lambda: self.block(depth + 1, indent + 1)
        if k < 0.58:
            out = [pad + "if %s:" % self.expr()] + body()
            for _ in range(self.r.randint(0, 2)):
                out += [pad + "elif %s:" % self.expr()] + body()
            if self.r.random() < 0.4:
                out += [pad + "else:"] + body()
            return out
        if k < 0.66:
            out = [pad + "for %s in %s:" % (self.r.choice(["i", "i, j", "(a, b)"]), self.expr())] + body()
            if self.r.random() < 0.2:
                out += [pad + "else:"] + body()
            return out
        if k < 0.71:
            out = [pad + "while %s:" % self.expr()] + body()
            if self.r.random() < 0.2:
                out += [pad + "else:"] + body()
            return out
        if k < 0.77:
            out = [pad + "try:"] + body()
            handlers = self.r.randint(0, 2)
            for _ in range(handlers):
                out += [pad + "except %s:" % self.r.choice(["ValueError", "(KeyError, IndexError) as e", "Exception"])] + body()
            if handlers and self.r.random() < 0.3:
                out += [pad + "else:"] + body()
            if not handlers or self.r.random() < 0.3:
                out += [pad + "finally:"] + body()
            return out
        if k < 0.81:
            return [pad + "with open(%s) as fh:" % self.name()] + body()
        if k < 0.85:
            out = [pad + "match %s:" % self.name()]
            for pat in self.r.sample(["1", "'s'", "[x, *rest]", "{'k': v}", "Point(x=0)", "_", "other", "None", "-1 | 2"], self.r.randint(1, 3)):
                out += [pad + "    case %s:" % pat] + self.block(depth + 1, indent + 2)
            return out
        if k < 0.93:
            return self.funcdef(depth + 1, indent)
        return self.classdef(depth + 1, indent)

    def funcdef(self, depth, indent):
        pad = "    " * indent
        self.fn_count += 1
        out = []
        if self.r.random() < 0.15:
            out.append(pad + "@decorator(%s)" % self.expr())
        args = self.r.choice(["", "a", "a, b=1", "self, x", "*args, **kw", "a, b=lambda: 0"])
        out.append(pad + "%sdef fn%d(%s):" % (self.r.choice(["", "", "", "async "]), self.fn_count, args))
        if self.r.random() < 0.3:
            if self.r.random() < 0.5:
                out.append(pad + '    """Doc line."""')
            else:
                out += [pad + '    """Doc', "", pad + "    more.", pad + '    """']
        return out + self.block(depth, indent + 1)

    def classdef(self, depth, indent):
        pad = "    " * indent
        self.fn_count += 1
        out = [pad + "class C%d(%s):" % (self.fn_count, self.r.choice(["", "Base", "A, metaclass=M"]))]
        if self.r.random() < 0.2:
            out.append(pad + "    x = %s" % self.expr())
        for _ in range(self.r.randint(0, 3)):
            out += self.funcdef(depth, indent + 1)
        if len(out) == 1:
            out.append(pad + "    pass")
        return out

    def program(self):
        lines = []
        if self.r.random() < 0.2:
            lines.append('"""Module doc."""')
        for _ in range(self.r.randint(1, 5)):
            lines += self.stmt(0, 0)
        return "\n".join(lines) + "\n"


def facts(code):
    raw = analyze(code)
    h = h_visit(code).total
    cv = ComplexityVisitor.from_code(code)
    blocks = [
        {"name": b.name, "line": b.lineno, "complexity": b.complexity}
        for b in sorted(cc_visit(code), key=lambda b: (b.lineno, b.name))
    ]
    snippet_cc = (sum(b["complexity"] for b in blocks) / len(blocks)) if blocks else cv.total_complexity
    return {
        "loc": raw.loc, "lloc": raw.lloc, "sloc": raw.sloc, "comments": raw.comments,
        "multi": raw.multi, "blank": raw.blank, "single_comments": raw.single_comments,
        "h1": h.h1, "h2": h.h2, "N1": h.N1, "N2": h.N2,
        "volume": h.volume, "difficulty": h.difficulty, "effort": h.effort,
        "total_complexity": cv.total_complexity,
        "blocks": blocks,
        "snippet_cc": snippet_cc,
        "mi": mi_visit(code, True),
    }


def valid(code):
    try:
        compile(code, "<gen>", "exec")
        analyze(code)
        return True
    except (SyntaxError, ValueError):
        return False


def main():
    warnings.simplefilter("ignore")
    assert radon.__version__ == "6.0.1", radon.__version__
    cases = [(name, code) for name, code in CASES]
    gen = Gen(random.Random(SEED))
    made = 0
    while made < RANDOM_CASES:
        code = gen.program()
        if valid(code):
            made += 1
            cases.append(("random_%03d" % made, code))
    out = [{"id": name, "source": code, "expected": facts(code)} for name, code in cases]
    json.dump({"tool": "radon %s" % radon.__version__, "python": sys.version.split()[0], "cases": out},
              sys.stdout, indent=1, sort_keys=False)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
