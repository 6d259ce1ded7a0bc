"""Hand-picked oracle snippets: one construct or edge case each."""

BUBBLE = """def bubbleSort(arr):
    n = len(arr)
    for i in range(n-1):
        for j in range(0, n-i-1):
            if arr[j] > arr[j+1]:
               arr[j],arr[j+1] = arr[j+1],arr[j]
"""

BUBBLE_REFACTORED = """def bubbleSort(arr):
    n = len(arr)
    from itertools import product
    for i, j in product(range(n-1), range(n-1)):
        if arr[j] > arr[j+1]:
            arr[j], arr[j+1] = arr[j+1], arr[j]
"""

CASES = [
    ("empty", ""),
    ("blank_lines", "\n\n\n"),
    ("pass", "pass\n"),
    ("comment_only", "# only a comment\n"),
    ("comments_and_blank", "x = 1\n\n# note\n"),
    ("no_trailing_newline", "x = 1\ny = x + 2"),
    ("bubble_sort", BUBBLE),
    ("bubble_sort_refactored", BUBBLE_REFACTORED),
    ("bubble_sort_refactored_commented", BUBBLE_REFACTORED + """
# Changes made:
# 1. Replaced the nested for loop with itertools.product.
# 2. Removed the unnecessary -i in the inner loop.
"""),
    ("single_binop", "a + b\n"),
    ("call_assign", "x = f(y)\n"),
    ("if_and", "def g(x):\n    if x and x > 0:\n        return x\n"),
    ("straight_function", "def f():\n    return 1\n"),
    ("elif_chain", "def sign(x):\n    if x > 0:\n        return 1\n    elif x < 0:\n        return -1\n    elif x == 0:\n        return 0\n    else:\n        return None\n"),
    ("for_else", "for i in range(3):\n    if i:\n        break\nelse:\n    print('none')\n"),
    ("while_else", "while x:\n    x -= 1\nelse:\n    x = 10\n"),
    ("try_handlers", "try:\n    a = 1 / b\nexcept ZeroDivisionError:\n    a = 0\nexcept (TypeError, ValueError) as e:\n    raise\nelse:\n    a += 1\nfinally:\n    done = True\n"),
    ("try_finally", "try:\n    x()\nfinally:\n    y()\n"),
    ("with_stmt", "with open(p) as f, open(q) as g:\n    data = f.read() + g.read()\n"),
    ("assert_stmt", "def check(x):\n    assert x > 0, 'positive'\n    assert x and y\n    return x\n"),
    ("lambda_expr", "f = lambda x: x + 1 if x else x - 1\n"),
    ("ternary", "y = a if b else c\nz = (1 if p else 2) + 3\n"),
    ("boolops_nested", "ok = a and b or c and not d\n"),
    ("compare_chain", "inside = 0 <= x < 10 != y\n"),
    ("comprehensions", "sq = [x * x for x in xs if x if x > 2]\npairs = {k: v for k, v in d.items()}\ngen = sum(i for i in range(n) for j in range(i))\ns = {a for a in b}\n"),
    ("augassign_all", "a += 1\na -= b\na *= 2\na /= c\na //= 3\na %= 4\na **= 2\na <<= 1\na >>= 1\na &= m\na |= m\na ^= m\n"),
    ("unary_ops", "a = -b\nc = +d\ne = ~f\ng = not h\n"),
    ("operand_equality", "x = a + 1\ny = a + 1.0\nz = a + True\nw = x + 'x'\nv = 0j + 0\n"),
    ("attr_operands", "total = self.x + other.x + x\n"),
    ("compound_operands", "r = (a + b) * (a + b)\n"),
    ("function_scoping", "k = a + b\ndef f(a, b):\n    return a + b\ndef g():\n    return a + b\n"),
    ("closure", "def outer(x):\n    def inner(y):\n        if y:\n            return x + y\n        return x\n    return inner\n"),
    ("class_methods", "class A:\n    def a(self):\n        if self.x:\n            return 1\n    def b(self):\n        for i in self.y:\n            while i:\n                i -= 1\n"),
    ("class_no_methods", "class Config:\n    debug = False\n    level = 1 if debug else 2\n"),
    ("class_single_method", "class B(Base):\n    def run(self, x):\n        return x or self.default\n"),
    ("inner_class", "class Outer:\n    class Inner:\n        def m(self):\n            if a:\n                pass\n    def n(self):\n        pass\n"),
    ("class_in_function", "def factory():\n    class Local:\n        def m(self):\n            return 1 if a else 2\n    return Local\n"),
    ("method_in_if", "class C:\n    if flag:\n        def m(self):\n            return 1\n    else:\n        def m(self):\n            return 2\n"),
    ("function_in_if", "if PY3:\n    def f():\n        return a and b\nelse:\n    def f():\n        return a\n"),
    ("decorated", "@property\ndef value(self):\n    return self._v or 0\n\n@app.route('/x', methods=['GET'])\nasync def handler(req):\n    await req.send(1 + 2)\n"),
    ("async_for_with", "async def main():\n    async with lock:\n        async for item in stream:\n            if item:\n                total += item\n"),
    ("docstring_module", '"""Module docstring\nspanning lines.\n"""\nimport os\n'),
    ("docstring_function", 'def f():\n    """One line."""\n    return 1\n'),
    ("docstring_multiline_blank", 'def f():\n    """Summary.\n\n    Details here.\n    """\n    pass\n'),
    ("string_statement_multiline", "x = 1\n'''\nloose string\n'''\ny = 2\n"),
    ("string_assigned_multiline", "text = '''\nline one\nline two\n'''\n"),
    ("trailing_comments", "x = 1  # one\ny = 2  # two\n# three\n"),
    ("semicolons", "a = 1; b = 2; c = a + b\n"),
    ("one_line_compound", "if x: y = 1\nfor i in z: pass\nwhile q: q -= 1\n"),
    ("colon_in_dict_slice", "d = {1: 2}\ns = a[1:2]\nf = lambda: 0\n"),
    ("walrus", "if (n := len(a)) > 10:\n    print(n)\n"),
    ("backslash_continuation", "total = a + \\\n    b + \\\n    c\n"),
    ("bracket_continuation", "values = [\n    1,\n    2,\n\n    3,\n]\n"),
    ("fstrings", "name = 'w'\nmsg = f'hello {name!r:>10} {x + 1}'\nnested = f'{a:{width}.{prec}}'\n"),
    ("bytes_and_prefixes", "a = b'abc' + rb'\\d'\nb = r'\\n' + u'x'\nc = 'implicit' 'concat'\n"),
    ("numbers", "a = 0x1F + 0o17 + 0b101 + 1_000\nb = 1.5e-3 * 2j\nc = 10 ** 20 + 1e3\n"),
    ("match_basic", "match cmd:\n    case 'go':\n        move()\n    case 'stop' | 'halt':\n        stop()\n    case _:\n        pass\n"),
    ("match_no_wildcard", "match p:\n    case Point(x=0, y=0):\n        a = 1\n    case [x, *rest]:\n        a = 2\n    case {'k': v, **kw}:\n        a = 3\n"),
    ("match_capture_only", "match v:\n    case other:\n        pass\n"),
    ("match_guard", "def f(v):\n    match v:\n        case int(n) if n > 0:\n            return n\n        case -1:\n            return 0\n"),
    ("global_nonlocal", "def f():\n    global g\n    g = g + 1\n    def h():\n        nonlocal_value = 1\n    return h\n"),
    ("star_args", "def f(*args, **kwargs):\n    return g(*args, **kwargs) + len(args)\n"),
    ("defaults_not_counted", "def f(a=1 if x else 2, b=c or d):\n    return a\n"),
    ("yield_gen", "def gen(n):\n    i = 0\n    while i < n:\n        yield i\n        i += 1\n    yield from other()\n"),
    ("subscript_slices", "a[1:2, ::3]\nb = m[i][j] + m[j][i]\n"),
    ("matmul", "c = a @ b\nc @= d\n"),
    ("in_notin_is", "t = a in b\nu = a not in b\nv = a is None\nw = a is not None\n"),
    ("set_dict_displays", "s = {1, 2, *other}\nd = {**base, 'k': 1 + 2}\n"),
    ("generator_call_arg", "total = sum(x * 2 for x in xs if x)\n"),
    ("nested_comprehension_ifs", "m = [[c for c in row if c > 0] for row in grid if row]\n"),
    ("raise_from", "try:\n    pass\nexcept E as e:\n    raise Err('x') from e\n"),
    ("imports", "import os, sys as system\nfrom . import a\nfrom ..b import (c, d as e)\nfrom x import *\n"),
    ("del_stmt", "del a[0], b.c, d\n"),
    ("annotated", "x: int = 1\ny: 'List[int]'\ndef f(a: int = 2) -> str:\n    return str(a + 1)\n"),
    ("tabs_indent", "if x:\n\ty = 1\n\tif y:\n\t\tz = y * 2\n"),
    ("formfeed_line", "x = 1\n\x0c\ny = 2\n"),
    ("unicode_names", "café = 1\nnaïve = café + 2\ns = 'ünïcödé'\n"),
    ("long_function", "def process(data, limit=10):\n    # Filter and sort\n    result = []\n    for item in data:\n        if item is None:\n            continue\n        if item.value > limit and item.active:\n            result.append(item.value * 2)\n        elif item.value < 0 or item.flag:\n            result.append(-item.value)\n    result.sort(key=lambda v: -v)\n    try:\n        top = result[0]\n    except IndexError:\n        top = None\n    return top, len(result)\n"),
    ("heavy_comments", "# a\n# b\n# c\nx = 1  # d\n# e\n"),
    ("docstring_only", '"""Just a docstring."""\n'),
    ("comment_dense_function", "def f(x):\n    # c1\n    # c2\n    # c3\n    # c4\n    return x * 2 + 1  # c5\n"),
    ("while_true_break", "while True:\n    line = read()\n    if not line:\n        break\n    out.append(line.strip())\n"),
    ("conditional_import", "try:\n    import json\nexcept ImportError:\n    json = None\n"),
    ("many_methods_class", "class Stack:\n    def __init__(self):\n        self.items = []\n    def push(self, x):\n        self.items.append(x)\n    def pop(self):\n        if not self.items:\n            raise IndexError('empty')\n        return self.items.pop()\n    def peek(self):\n        return self.items[-1] if self.items else None\n"),
    ("crlf_free_mixed", "def add(a, b):\n\n    return a + b\n\n\nprint(add(1, 2))\n"),
    ("string_keys_collide", "r = x + 'x' + y\n"),
    ("await_expr", "async def f():\n    return await g() + await h()\n"),
    ("parenthesized_with", "with (open(a) as f,\n      open(b) as g):\n    pass\n"),
    ("posonly_kwonly", "def f(a, /, b, *, c=1):\n    return a + b + c\n"),
    ("ellipsis_none", "x = ... if y is None else None\n"),
    ("power_unary", "y = -x ** 2\nz = 2 ** -1\n"),
    ("bool_in_while", "while a and b or c:\n    pass\n"),
]
