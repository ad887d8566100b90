"""Independent reference implementations used only by the tests.

None of these share code with the package: they work on plain integer
adjacency matrices or strings.
"""

import random

from currigraph.model import Course, CourseCode, CurriculumGraph, EdgeKind, PrereqEdge


def reachability_matrix(n, edges):
    """Boolean transitive closure by Floyd-Warshall (Warshall's algorithm)."""
    r = [[False] * n for _ in range(n)]
    for u, v in edges:
        r[u][v] = True
    for k in range(n):
        rk = r[k]
        for i in range(n):
            if r[i][k]:
                ri = r[i]
                for j in range(n):
                    if rk[j]:
                        ri[j] = True
    return r


def all_simple_paths(n, edges, a, b):
    """Every simple path a->b, by plain exhaustive DFS without pruning."""
    succ = {i: [v for u, v in edges if u == i] for i in range(n)}
    out = []

    def dfs(path):
        u = path[-1]
        if u == b:
            out.append(tuple(path))
            return
        for v in succ[u]:
            if v not in path:
                dfs(path + [v])

    dfs([a])
    return out


def levenshtein_matrix(a, b):
    """Full (len(a)+1) x (len(b)+1) dynamic-programming table."""
    d = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        d[i][0] = i
    for j in range(len(b) + 1):
        d[0][j] = j
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            d[i][j] = min(d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost)
    return d[len(a)][len(b)]


def scc_count(n, edges):
    """Non-trivial strongly connected components, via mutual reachability."""
    r = reachability_matrix(n, edges)
    seen = set()
    count = 0
    for i in range(n):
        if i in seen:
            continue
        comp = {j for j in range(n) if j == i or (r[i][j] and r[j][i])}
        seen |= comp
        if len(comp) > 1:
            count += 1
    return count


# --------------------------------------------------------------------------
# Graph fixtures shared by several test modules.

def code(i):
    return CourseCode("N", i + 1)


def graph_from_edges(n, edges, coreqs=()):
    courses = {code(i): Course(code(i), f"Node {i + 1}") for i in range(n)}
    es = [PrereqEdge(code(u), code(v)) for u, v in edges]
    es += [PrereqEdge(code(u), code(v), EdgeKind.COREQUISITE) for u, v in coreqs]
    return CurriculumGraph(courses=courses, edges=tuple(es))


def random_dag(rng, n, max_edges):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    k = rng.randint(0, min(max_edges, len(pairs)))
    perm = list(range(n))
    rng.shuffle(perm)
    return [(perm[u], perm[v]) for u, v in rng.sample(pairs, k)]


def random_digraph(rng, n, p):
    return [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]


def planted_cycles(rng, n, k):
    """A DAG over blocks with ``k`` disjoint directed cycles planted in blocks."""
    order = list(range(n))
    rng.shuffle(order)
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.15:
                edges.add((order[i], order[j]))
    size = n // k
    for b in range(k):
        block = order[b * size:(b + 1) * size]
        length = rng.randint(2, len(block))
        cyc = block[:length]
        for i in range(length):
            edges.add((cyc[i], cyc[(i + 1) % length]))
    return sorted(edges)


def mutate(rng, text, edits, alphabet="abcdefghijklmnopqrstuvwxyz"):
    """Apply ``edits`` random single-character insert/delete/substitute edits."""
    s = list(text)
    for _ in range(edits):
        op = rng.choice(("ins", "del", "sub")) if s else "ins"
        if op == "ins":
            s.insert(rng.randint(0, len(s)), rng.choice(alphabet))
        elif op == "del":
            del s[rng.randrange(len(s))]
        else:
            i = rng.randrange(len(s))
            s[i] = rng.choice([c for c in alphabet if c != s[i].lower()])
    return "".join(s)


def rng_for(seed):
    return random.Random(seed)


def typo_trial(rng, catalog_text):
    """Mutate one resolved title reference in a catalog by 1-2 character edits.

    Returns ``(new_catalog_text, original_title, mutated_title)``. The mutated
    title never collides with an existing title and still reads as a single
    title reference.
    """
    import csv
    import io

    from currigraph.ingest import parse_prereq_expr, print_prereq_expr
    from currigraph.model import All, Any, ByTitle, Ref, normalize_title

    rows = list(csv.reader(io.StringIO(catalog_text)))
    header, body = rows[0], rows[1:]
    col = header.index("prerequisites")
    titles = {r[header.index("title")].casefold() for r in body}
    candidates = []
    for i, r in enumerate(body):
        expr = parse_prereq_expr(r[col])
        leaves = []

        def walk(node, path):
            if isinstance(node, Ref):
                if isinstance(node.ref, ByTitle) and node.ref.key in titles:
                    leaves.append(path)
            elif node is not None:
                for j, child in enumerate(node.children):
                    walk(child, path + (j,))

        walk(expr, ())
        candidates += [(i, expr, p) for p in leaves]

    def replace(node, path, new):
        if not path:
            return new
        kids = list(node.children)
        kids[path[0]] = replace(kids[path[0]], path[1:], new)
        return type(node)(tuple(kids))

    def leaf_at(node, path):
        for j in path:
            node = node.children[j]
        return node

    while True:
        i, expr, path = rng.choice(candidates)
        leaf = leaf_at(expr, path)
        mutated = normalize_title(mutate(rng, leaf.ref.text, rng.randint(1, 2)))
        if not mutated or mutated.casefold() in titles:
            continue
        try:
            reparsed = parse_prereq_expr(mutated)
        except Exception:
            continue
        if reparsed != Ref(ByTitle(mutated)):
            continue
        new_expr = replace(expr, path, Ref(ByTitle(mutated), leaf.kind))
        body[i][col] = print_prereq_expr(new_expr)
        out = io.StringIO()
        csv.writer(out, lineterminator="\n").writerows([header] + body)
        return out.getvalue(), leaf.ref.text, mutated
