"""Command line front end.

Every subcommand loads a model file (the packaged one by default),
resolves a group plus whatever structures and subgroups it needs, and
prints the requested computation in text, JSON, or Markdown.  All
numeric output is exact: integers stay integers and Gaussian rationals
are rendered symbolically, never as floats.

Exit codes: 0 on success, 1 when ``verify-paper`` finds a mismatch,
2 for usage errors and unparseable or unresolvable input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

from . import alg, builtin
from .characters import (
    AlignmentError,
    CharacterTable,
    CharacterTableError,
    align_to_reference,
    compute_character_table,
    decompose,
    load_reference_table,
    reference_column_map,
    table_from_cache_dict,
    table_to_cache_dict,
)
from .groups import (
    FiniteGroup,
    GroupSpecError,
    GroupTooLargeError,
    build_group,
)
from .ramification import (
    SphericalSystemError,
    canonical_character,
    curve_genus,
    fiber_orbit_structure,
    fixed_point_table,
    is_disjoint,
    quotient_genus,
    stabilizer_set,
    validate_spherical,
)
from .search import search_all_pairs
from .verify import WHOLE_CURVE, render_report, verify_paper

CACHE_ENV = "QSLAB_CACHE"


class CliError(Exception):
    """Usage or resolution failure; rendered to stderr with exit code 2."""


# -- model and group resolution -----------------------------------------


def _load_model(path: str | None) -> alg.SessionModel:
    if path is None:
        text = resources.files("qslab.data").joinpath("g32_27.alg").read_text()
        label = "<packaged model>"
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise CliError(f"cannot read {path}: {exc.strerror or exc}")
        label = path
    try:
        return alg.parse_model(text)
    except alg.ParseError as exc:
        raise CliError(f"{label}: {exc}")


def _resolve_group(model: alg.SessionModel, name: str | None) -> tuple[str, FiniteGroup]:
    names = model.group_names()
    if not names:
        raise CliError("input declares no groups")
    if name is None:
        if len(names) > 1:
            raise CliError(
                "input declares several groups; name one of: " + ", ".join(names)
            )
        name = names[0]
    try:
        spec = model.group_spec(name)
    except KeyError:
        raise CliError(f"unknown group {name!r}; input declares: " + ", ".join(names))
    try:
        return name, build_group(spec)
    except (GroupSpecError, GroupTooLargeError) as exc:
        raise CliError(f"group {name}: {exc}")


def _resolve_structure(model, group_name, group, sname):
    try:
        decl = model.structure(sname)
    except KeyError:
        available = [d.name for d in model.structures_on(group_name)]
        hint = "; declared: " + ", ".join(available) if available else ""
        raise CliError(f"unknown structure {sname!r}{hint}")
    if decl.group_name != group_name:
        raise CliError(f"structure {sname} is declared on group {decl.group_name}")
    try:
        entries = [group.evaluate_word(w) for w in decl.words]
    except KeyError as exc:
        raise CliError(f"structure {sname}: unknown generator {exc.args[0]}")
    try:
        return validate_spherical(group, entries)
    except SphericalSystemError as exc:
        raise CliError(f"structure {sname}: {exc}")


def _resolve_subgroup(model, group_name, group, text):
    """A declared subgroup name, or an inline generator list like ``g2*g5, g4``."""
    try:
        decl = model.subgroup(text)
    except KeyError:
        decl = None
    if decl is not None and decl.group_name == group_name:
        words, label = decl.words, text
    else:
        try:
            words = alg.parse_word_list_fragment(text, group.spec)
        except alg.ParseError as exc:
            raise CliError(f"--subgroup {text!r}: {exc}")
        label = ", ".join("*".join(w) if w else "1" for w in words) or "1"
    return group.subgroup_closure(group.evaluate_word(w) for w in words), label


def _structure_args(args, count):
    got = args.structure or []
    if count is not None and len(got) != count:
        noun = "structure" if count == 1 else "structures"
        raise CliError(
            f"{args.command} needs exactly {count} --structure {noun}, got {len(got)}"
        )
    return got


# -- character table cache ----------------------------------------------


def _table_for(group: FiniteGroup, cache_dir: str | None) -> CharacterTable:
    if cache_dir is None:
        return compute_character_table(group)
    path = os.path.join(cache_dir, f"chartable-{group.spec.content_hash()}.json")
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        table = table_from_cache_dict(group, payload)
        if table.verify_orthogonality():
            return table
    except FileNotFoundError:
        pass
    except Exception:
        pass  # corrupt or stale cache entry; recompute and overwrite below
    table = compute_character_table(group)
    os.makedirs(cache_dir, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(table_to_cache_dict(table), fh, sort_keys=True)
        fh.write("\n")
    return table


# -- published-order display --------------------------------------------


def _is_reference_group(group: FiniteGroup) -> bool:
    return group.spec.content_hash() == builtin.G32_27_SPEC.content_hash()


def _column_layout(group: FiniteGroup) -> tuple[tuple[int, ...], bool]:
    """Class display order: the published one when this is the bundled group."""
    if _is_reference_group(group):
        try:
            return reference_column_map(group, load_reference_table()), True
        except AlignmentError:
            pass
    return tuple(range(len(group.conjugacy_classes()))), False


def _table_layout(table: CharacterTable):
    """(row order, column order, published?) for rendering a table."""
    if _is_reference_group(table.group):
        try:
            row_perm, col_perm = align_to_reference(table, load_reference_table())
            return row_perm, col_perm, True
        except AlignmentError:
            pass
    k = len(table.group.conjugacy_classes())
    return tuple(range(len(table.rows))), tuple(range(k)), False


def _row_labels(table: CharacterTable) -> dict[int, str]:
    """Map canonical row index to its display label (chi1, chi2, ...)."""
    row_perm, _, _ = _table_layout(table)
    return {canonical: f"chi{i + 1}" for i, canonical in enumerate(row_perm)}


def _order_note(published: bool) -> str:
    return "published order" if published else "canonical order"


# -- subcommands --------------------------------------------------------


def _cmd_info(model, args):
    group_name, group = _resolve_group(model, args.group)
    classes = group.conjugacy_classes()
    center = group.center()
    whole = group.subgroup_closure(group.basis_generators())
    rank = len(group.minimal_generators(whole))
    payload = {
        "group": group_name,
        "order": group.order,
        "exponent": group.exponent(),
        "generators": [
            {"name": name, "order": group.generator(name).order()}
            for name, _ in group.spec.generator_names
        ],
        "class_count": len(classes),
        "center_order": center.order,
        "center": [g.word() for g in sorted(center.elements, key=group.index)],
        "minimal_generator_count": rank,
        "structures": [],
        "subgroups": [],
    }
    for decl in model.structures_on(group_name):
        entry = {"name": decl.name, "entries": ["*".join(w) for w in decl.words]}
        try:
            system = _resolve_structure(model, group_name, group, decl.name)
            entry["type"] = list(system.signature)
        except CliError as exc:
            entry["invalid"] = str(exc)
        payload["structures"].append(entry)
    for decl in model.subgroups:
        if decl.group_name != group_name:
            continue
        sub = group.subgroup_closure(group.evaluate_word(w) for w in decl.words)
        payload["subgroups"].append(
            {
                "name": decl.name,
                "order": sub.order,
                "generators": ["*".join(w) for w in decl.words],
                "normal": group.is_normal(sub),
            }
        )

    lines = [
        f"group {group_name}: order {payload['order']}, exponent "
        f"{payload['exponent']}, {payload['class_count']} conjugacy classes",
        "generators: "
        + ", ".join(f"{g['name']} (order {g['order']})" for g in payload["generators"]),
        f"center: order {payload['center_order']}, elements "
        + ", ".join(payload["center"]),
        f"minimal generating sets have size {rank}",
    ]
    for entry in payload["structures"]:
        if "type" in entry:
            detail = "type (" + ", ".join(map(str, entry["type"])) + ")"
        else:
            detail = "invalid: " + entry["invalid"]
        lines.append(
            f"structure {entry['name']}: {detail}; entries "
            + ", ".join(entry["entries"])
        )
    for entry in payload["subgroups"]:
        normality = "normal" if entry["normal"] else "not normal"
        lines.append(
            f"subgroup {entry['name']}: order {entry['order']}, {normality}, "
            "generated by " + ", ".join(entry["generators"])
        )
    text = "\n".join(lines)
    md_lines = [f"# {group_name}", ""] + [f"- {line}" for line in lines]
    return payload, text, "\n".join(md_lines)


def _cmd_classes(model, args):
    group_name, group = _resolve_group(model, args.group)
    classes = group.conjugacy_classes()
    order, published = _column_layout(group)
    rows = []
    for display, c_index in enumerate(order, start=1):
        cls = classes[c_index]
        rows.append(
            {
                "index": display,
                "representative": cls.representative.word(),
                "size": cls.size,
                "element_order": cls.representative.order(),
                "members": [
                    g.word() for g in sorted(cls.elements, key=group.index)
                ],
            }
        )
    payload = {"group": group_name, "order": _order_note(published), "classes": rows}
    lines = [f"{len(rows)} conjugacy classes of {group_name} ({_order_note(published)})"]
    for r in rows:
        lines.append(
            f"{r['index']:3d}: rep {r['representative']}, size {r['size']}, "
            f"element order {r['element_order']}; members " + ", ".join(r["members"])
        )
    md = [
        f"# Conjugacy classes of {group_name} ({_order_note(published)})",
        "",
        "| # | representative | size | element order | members |",
        "| --- | --- | --- | --- | --- |",
    ]
    for r in rows:
        md.append(
            f"| {r['index']} | {r['representative']} | {r['size']} "
            f"| {r['element_order']} | {', '.join(r['members'])} |"
        )
    return payload, "\n".join(lines), "\n".join(md)


def _cmd_chartable(model, args):
    group_name, group = _resolve_group(model, args.group)
    table = _table_for(group, args.cache_dir)
    row_perm, col_perm, published = _table_layout(table)
    classes = group.conjugacy_classes()
    headers = [classes[c].representative.word() for c in col_perm]
    sizes = [classes[c].size for c in col_perm]
    matrix = [
        [str(table.rows[r].values[c]) for c in col_perm] for r in row_perm
    ]
    payload = {
        "group": group_name,
        "order": _order_note(published),
        "classes": [
            {"representative": h, "size": s} for h, s in zip(headers, sizes)
        ],
        "rows": [
            {
                "label": f"chi{i + 1}",
                "degree": table.rows[r].at_identity().as_integer(),
                "values": [table.rows[r].values[c].to_json() for c in col_perm],
            }
            for i, r in enumerate(row_perm)
        ],
    }
    label_w = max(len(r["label"]) for r in payload["rows"])
    widths = [
        max(len(headers[j]), max(len(row[j]) for row in matrix))
        for j in range(len(headers))
    ]
    lines = [f"character table of {group_name} ({_order_note(published)})"]
    lines.append(
        " " * label_w
        + "  "
        + "  ".join(h.rjust(widths[j]) for j, h in enumerate(headers))
    )
    for i, row in enumerate(matrix):
        lines.append(
            payload["rows"][i]["label"].ljust(label_w)
            + "  "
            + "  ".join(v.rjust(widths[j]) for j, v in enumerate(row))
        )
    md = [
        f"# Character table of {group_name} ({_order_note(published)})",
        "",
        "| | " + " | ".join(headers) + " |",
        "| --- |" + " --- |" * len(headers),
    ]
    for i, row in enumerate(matrix):
        md.append(f"| {payload['rows'][i]['label']} | " + " | ".join(row) + " |")
    return payload, "\n".join(lines), "\n".join(md)


def _cmd_sigma(model, args):
    group_name, group = _resolve_group(model, args.group)
    (sname,) = _structure_args(args, 1)
    system = _resolve_structure(model, group_name, group, sname)
    members = sorted(stabilizer_set(system), key=group.index)
    payload = {
        "group": group_name,
        "structure": sname,
        "size": len(members),
        "elements": [g.word() for g in members],
    }
    text = (
        f"stabilizer set of {sname}: {len(members)} elements\n"
        + ", ".join(payload["elements"])
    )
    md = (
        f"# Stabilizer set of {sname}\n\n{len(members)} elements:\n\n"
        + "\n".join(f"- {w}" for w in payload["elements"])
    )
    return payload, text, md


def _cmd_disjoint(model, args):
    group_name, group = _resolve_group(model, args.group)
    names = _structure_args(args, 2)
    systems = [_resolve_structure(model, group_name, group, n) for n in names]
    sets = [stabilizer_set(s) for s in systems]
    common = sorted(sets[0] & sets[1], key=group.index)
    verdict = is_disjoint(*systems)
    payload = {
        "group": group_name,
        "structures": names,
        "sizes": [len(s) for s in sets],
        "common": [g.word() for g in common],
        "disjoint": verdict,
    }
    text = (
        f"stabilizer sets of {names[0]} ({len(sets[0])} elements) and "
        f"{names[1]} ({len(sets[1])} elements) share only: "
        + ", ".join(payload["common"])
        + f"\ndisjoint away from the identity: {'yes' if verdict else 'no'}"
    )
    md = (
        f"# Stabilizer overlap of {names[0]} and {names[1]}\n\n"
        f"- sizes: {len(sets[0])} and {len(sets[1])}\n"
        f"- common elements: {', '.join(payload['common'])}\n"
        f"- disjoint away from the identity: {'yes' if verdict else 'no'}"
    )
    return payload, text, md


def _cmd_fixed_points(model, args):
    group_name, group = _resolve_group(model, args.group)
    (sname,) = _structure_args(args, 1)
    system = _resolve_structure(model, group_name, group, sname)
    genus = curve_genus(system)
    counts = fixed_point_table(system)
    order, published = _column_layout(group)
    classes = group.conjugacy_classes()
    rows = [
        {
            "representative": classes[c].representative.word(),
            "fixed_points": WHOLE_CURVE if counts[c] is None else counts[c],
        }
        for c in order
    ]
    payload = {
        "group": group_name,
        "structure": sname,
        "genus": genus,
        "order": _order_note(published),
        "classes": rows,
    }
    lines = [
        f"fixed points on the genus {genus} curve of {sname} "
        f"({_order_note(published)})"
    ]
    width = max(len(r["representative"]) for r in rows)
    for r in rows:
        lines.append(f"  {r['representative'].ljust(width)}  {r['fixed_points']}")
    md = [
        f"# Fixed points on the curve of {sname}",
        "",
        f"Genus {genus}; classes in {_order_note(published)}.",
        "",
        "| class representative | fixed points |",
        "| --- | --- |",
    ]
    for r in rows:
        md.append(f"| {r['representative']} | {r['fixed_points']} |")
    return payload, "\n".join(lines), "\n".join(md)


def _cmd_canonical(model, args):
    group_name, group = _resolve_group(model, args.group)
    (sname,) = _structure_args(args, 1)
    system = _resolve_structure(model, group_name, group, sname)
    table = _table_for(group, args.cache_dir)
    canonical = canonical_character(system, table)
    row_perm, col_perm, published = _table_layout(table)
    labels = _row_labels(table)
    mults = decompose(canonical, table)
    terms = []
    for r in row_perm:
        m = mults[r]
        if m == 1:
            terms.append(labels[r])
        elif m != 0:
            terms.append(f"{m}*{labels[r]}")
    payload = {
        "group": group_name,
        "structure": sname,
        "genus": curve_genus(system),
        "order": _order_note(published),
        "values": [canonical.values[c].to_json() for c in col_perm],
        "decomposition": {
            labels[r]: mults[r] for r in row_perm if mults[r] != 0
        },
    }
    text = (
        f"canonical character of the genus {payload['genus']} curve of {sname} "
        f"({_order_note(published)}):\n"
        + "  ".join(str(canonical.values[c]) for c in col_perm)
        + "\ndecomposition: "
        + " + ".join(terms)
    )
    md = (
        f"# Canonical character of the curve of {sname}\n\n"
        f"- genus: {payload['genus']}\n"
        f"- values ({_order_note(published)}): "
        + ", ".join(str(canonical.values[c]) for c in col_perm)
        + "\n- decomposition: "
        + " + ".join(terms)
    )
    return payload, text, md


def _cmd_quotient_genus(model, args):
    group_name, group = _resolve_group(model, args.group)
    (sname,) = _structure_args(args, 1)
    system = _resolve_structure(model, group_name, group, sname)
    sub, label = _resolve_subgroup(model, group_name, group, args.subgroup)
    genus = quotient_genus(system, sub)
    payload = {
        "group": group_name,
        "structure": sname,
        "subgroup": label,
        "subgroup_order": sub.order,
        "genus": genus,
    }
    text = (
        f"quotient of the {sname} curve by {label} "
        f"(order {sub.order}): genus {genus}"
    )
    md = (
        f"# Quotient genus\n\n- structure: {sname}\n- subgroup: {label} "
        f"(order {sub.order})\n- genus: {genus}"
    )
    return payload, text, md


def _cmd_fiber_orbits(model, args):
    group_name, group = _resolve_group(model, args.group)
    (sname,) = _structure_args(args, 1)
    system = _resolve_structure(model, group_name, group, sname)
    sub, label = _resolve_subgroup(model, group_name, group, args.subgroup)
    try:
        fiber = fiber_orbit_structure(system, args.branch, sub)
    except (IndexError, ValueError) as exc:
        raise CliError(f"--branch {args.branch}: {exc}")
    entry = system.entries[args.branch - 1]
    shape: dict[tuple[int, int], int] = {}
    for orbit in fiber.orbits:
        shape[orbit] = shape.get(orbit, 0) + 1
    payload = {
        "group": group_name,
        "structure": sname,
        "branch": args.branch,
        "entry": entry.word(),
        "entry_order": entry.order(),
        "subgroup": label,
        "subgroup_order": sub.order,
        "fiber_size": fiber.fiber_size,
        "orbits": [
            {"size": size, "stabilizer_order": stab} for size, stab in fiber.orbits
        ],
        "acts_freely": fiber.acts_freely,
    }
    shape_text = ", ".join(
        f"{count} x (size {size}, stabilizer order {stab})"
        for (size, stab), count in sorted(shape.items())
    )
    text = (
        f"fiber over branch point {args.branch} of {sname} "
        f"(entry {payload['entry']}, order {payload['entry_order']}): "
        f"{fiber.fiber_size} points\n"
        f"orbits under {label} (order {sub.order}): {shape_text}\n"
        f"acts freely: {'yes' if fiber.acts_freely else 'no'}"
    )
    md = (
        f"# Fiber orbits at branch point {args.branch} of {sname}\n\n"
        f"- branch entry: {payload['entry']} (order {payload['entry_order']})\n"
        f"- fiber size: {fiber.fiber_size}\n"
        f"- subgroup: {label} (order {sub.order})\n"
        f"- orbits: {shape_text}\n"
        f"- acts freely: {'yes' if fiber.acts_freely else 'no'}"
    )
    return payload, text, md


def _cmd_search(model, args):
    group_name, group = _resolve_group(model, args.group)
    names = args.structure or []
    if not names:
        names = [d.name for d in model.structures_on(group_name)]
    if len(names) != 2:
        raise CliError(
            "search needs exactly 2 structures (via --structure twice, or a model "
            f"declaring exactly two); got {len(names)}"
        )
    first = _resolve_structure(model, group_name, group, names[0])
    second = _resolve_structure(model, group_name, group, names[1])
    table = _table_for(group, args.cache_dir)
    canonical_first = canonical_character(first, table)
    canonical_second = canonical_character(second, table)
    report = search_all_pairs(table, canonical_first, canonical_second)
    labels = _row_labels(table)
    row_perm, _, _ = _table_layout(table)
    position = {r: i for i, r in enumerate(row_perm)}

    def ordered(indices):
        return [labels[r] for r in sorted(indices, key=position.__getitem__)]

    pairs = []
    for pair in sorted(
        report.pairs, key=lambda p: (position[p.a_index], position[p.b_index])
    ):
        pairs.append(
            {
                "a": labels[pair.a_index],
                "b": labels[pair.b_index],
                "admissible": ordered(pair.admissible),
                "euler_flat": pair.euler_flat,
            }
        )
    flat = [(p["a"], p["b"]) for p in pairs if p["euler_flat"]]
    payload = {
        "group": group_name,
        "structures": names,
        "pair_count": len(pairs),
        "all_pairs_admit_twist": report.theorem_holds,
        "trivial_twist_admissible_somewhere": report.trivial_admissible_anywhere,
        "euler_flat_pairs": [list(p) for p in flat],
        "pairs": pairs,
    }
    lines = [
        f"twist search on {group_name} with {names[0]} and {names[1]}: "
        f"{len(pairs)} pairs of degree-2 twists",
        f"every pair admits an admissible twist: "
        f"{'yes' if report.theorem_holds else 'no'}",
        f"trivial twist admissible somewhere: "
        f"{'yes' if report.trivial_admissible_anywhere else 'no'}",
        "euler-flat pairs: "
        + (", ".join(f"({a}, {b})" for a, b in flat) if flat else "none"),
    ]
    for p in pairs:
        lines.append(
            f"  A={p['a']} B={p['b']}: admissible " + ", ".join(p["admissible"])
        )
    md = [
        f"# Twist search on {group_name}",
        "",
        f"- structures: {names[0]} and {names[1]}",
        f"- every pair admits an admissible twist: "
        f"{'yes' if report.theorem_holds else 'no'}",
        f"- trivial twist admissible somewhere: "
        f"{'yes' if report.trivial_admissible_anywhere else 'no'}",
        "- euler-flat pairs: "
        + (", ".join(f"({a}, {b})" for a, b in flat) if flat else "none"),
        "",
        "| A | B | admissible twists | euler flat |",
        "| --- | --- | --- | --- |",
    ]
    for p in pairs:
        md.append(
            f"| {p['a']} | {p['b']} | {', '.join(p['admissible'])} "
            f"| {'yes' if p['euler_flat'] else 'no'} |"
        )
    return payload, "\n".join(lines), "\n".join(md)


# -- entry point --------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--input",
        metavar="FILE",
        default=None,
        help="model file to load (default: the packaged one)",
    )
    shared.add_argument(
        "--format",
        choices=("text", "json", "md"),
        default="text",
        help="output format (default: text)",
    )
    shared.add_argument(
        "--cache",
        metavar="DIR",
        default=None,
        help=f"character table cache directory (default: ${CACHE_ENV} if set)",
    )
    shared.add_argument(
        "group",
        nargs="?",
        default=None,
        help="group name (optional when the model declares exactly one)",
    )

    parser = argparse.ArgumentParser(
        prog="qslab",
        description="Exact group, character, and ramification computations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, structures=None):
        p = sub.add_parser(name, parents=[shared], help=help_text)
        p.set_defaults(func=func, structure_count=structures)
        return p

    add("info", _cmd_info, "summarize a group and its declared data")
    add("classes", _cmd_classes, "list conjugacy classes")
    add("chartable", _cmd_chartable, "print the character table")

    p = add("sigma", _cmd_sigma, "elements with fixed points on a curve")
    p.add_argument("--structure", action="append", required=True)

    p = add("disjoint", _cmd_disjoint, "compare two stabilizer sets")
    p.add_argument("--structure", action="append", required=True)

    p = add("fixed-points", _cmd_fixed_points, "fixed point counts per class")
    p.add_argument("--structure", action="append", required=True)

    p = add("canonical", _cmd_canonical, "canonical character of a curve")
    p.add_argument("--structure", action="append", required=True)

    p = add("quotient-genus", _cmd_quotient_genus, "genus of a quotient curve")
    p.add_argument("--structure", action="append", required=True)
    p.add_argument("--subgroup", required=True, help="declared name or generator list")

    p = add("fiber-orbits", _cmd_fiber_orbits, "subgroup orbits on a branch fiber")
    p.add_argument("--structure", action="append", required=True)
    p.add_argument("--subgroup", required=True, help="declared name or generator list")
    p.add_argument("--branch", type=int, required=True, help="branch point, 1-based")

    p = add("search", _cmd_search, "run the admissible twist search")
    p.add_argument(
        "--structure",
        action="append",
        help="structure pair (default: the model's two declared structures)",
    )

    p = sub.add_parser(
        "verify-paper",
        parents=[shared],
        help="re-derive and certify every published reference value",
    )
    p.add_argument(
        "--reference",
        metavar="FILE",
        default=None,
        help="character table fixture to certify against (default: packaged)",
    )
    p.set_defaults(func=None, structure_count=None)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    args.cache_dir = args.cache or os.environ.get(CACHE_ENV) or None
    try:
        model = _load_model(args.input)
        if args.command == "verify-paper":
            group_name, group = _resolve_group(model, args.group)
            report = verify_paper(spec=group.spec, reference_path=args.reference)
            fmt = {"md": "markdown"}.get(args.format, args.format)
            sys.stdout.write(render_report(report, fmt))
            return 0 if report.passed else 1
        payload, text, md = args.func(model, args)
    except CliError as exc:
        print(f"qslab: error: {exc}", file=sys.stderr)
        return 2
    except CharacterTableError as exc:
        print(f"qslab: error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"qslab: error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    elif args.format == "md":
        print(md)
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
