#!/usr/bin/env python
"""
Seifert Euler CLI

Euler classes, Jankins-Neumann realizability, torsion asymptotics and
SU(1,1)-representations of Seifert fibered 3-manifolds.
"""

import functools
import logging
import sys
from typing import Callable, Dict, List, Optional

import click

from src.abelian import class_equal, class_negate, parse_class
from src.asymptotics import leading_coefficient, leading_coefficient_for_class
from src.batch_runner import BatchRunner
from src.config import load_config
from src.errors import IndexSyntaxError, SeifertError
from src.euler_class import enumerate_realizable_equivalent, euler_class_of_index, jn_realizable
from src.report_writer import ReportWriter, format_rational
from src.seifert_core import (
    SeifertIndex,
    fuchsian_presentation,
    format_index,
    format_word,
    normalize,
    orbifold_euler_characteristic,
    orientation_reverse,
    parse_index,
    pi1_presentation,
    reversal_isomorphism,
    reversal_shifts,
    unit_tangent_bundle,
)
from src.su11 import conjugacy_classes, su11_to_sl2r, verify_relations


class DomainError(click.ClickException):
    """A SeifertError surfaced through click, reported like every other failure."""

    exit_code = 1

    def show(self, file=None):
        click.echo(f"❌ Error: {self.format_message()}", err=True)


class IndexInput(click.ParamType):
    """Custom Click parameter type that parses 'g; b; a1/b1, a2/b2, ...'."""
    name = "index"

    def convert(self, value, param, ctx):
        if isinstance(value, SeifertIndex):
            return value
        try:
            return parse_index(value)
        except IndexSyntaxError as e:
            # Malformed text is a usage error (exit 2)
            self.fail(str(e), param, ctx)
        except SeifertError as e:
            raise DomainError(str(e))


# =============================================================================
# Record builders: one dict per index, shared by text, JSON and batch output
# =============================================================================

def info_record(index: SeifertIndex) -> Dict:
    index = normalize(index)
    sig = index.signature()
    return {
        "index": format_index(index),
        "signature": sig.to_dict(),
        "chi": format_rational(orbifold_euler_characteristic(sig)),
        "euler_class": euler_class_of_index(index).to_dict(),
        "pi1": pi1_presentation(index).to_dict(),
        "fuchsian": fuchsian_presentation(sig).to_dict(),
        "unit_tangent_bundle": format_index(unit_tangent_bundle(sig)),
    }


def reverse_record(index: SeifertIndex) -> Dict:
    index = normalize(index)
    reversed_index = orientation_reverse(index)
    negated = class_equal(
        euler_class_of_index(reversed_index),
        class_negate(euler_class_of_index(index)),
    )
    return {
        "index": format_index(index),
        "reversed": format_index(reversed_index),
        "shifts": list(reversal_shifts(index)),
        "isomorphism": {name: format_word(word) for name, word in reversal_isomorphism(index).items()},
        "class_negated": negated,
    }


def euler_check_record(index: SeifertIndex) -> Dict:
    index = normalize(index)
    return {"index": format_index(index), **jn_realizable(euler_class_of_index(index)).to_dict()}


def lifts_record(
    index: SeifertIndex,
    precision: Optional[int] = None,
    tol: Optional[float] = None
) -> Dict:
    index = normalize(index)
    ledger = enumerate_realizable_equivalent(euler_class_of_index(index))
    reports = [leading_coefficient_for_class(index, c, tol) for c in ledger.equivalent_realizable]
    return {
        "index": format_index(index),
        "class": ledger.base_class.to_dict(),
        "equivalent_realizable": [c.to_dict() for c in ledger.equivalent_realizable],
        "coefficients": [report.coefficient.to_dict(precision) for report in reports],
        "induces_sl2r": ledger.induces_sl2r,
    }


def asym_record(
    index: SeifertIndex,
    precision: Optional[int] = None,
    alt: Optional[str] = None,
    tol: Optional[float] = None
) -> Dict:
    index = normalize(index)
    if alt is None:
        report = leading_coefficient(index, tol)
    else:
        report = leading_coefficient_for_class(index, parse_class(alt, index.signature()), tol)
    return {"index": format_index(index), **report.to_dict(precision)}


def su11_enum_record(index: SeifertIndex, tol: float) -> Dict:
    index = normalize(index)
    notes: List[str] = []
    representations = conjugacy_classes(index, tol, notes)
    k_triples = []
    for rep in representations:
        if list(rep.triple.k) not in k_triples:
            k_triples.append(list(rep.triple.k))
    return {
        "index": format_index(index),
        "k_triples": k_triples,
        "classes": [rep.triple.to_dict() for rep in representations],
        "count": len(representations),
        "notes": notes,
    }


def su11_verify_record(index: SeifertIndex, tol: float) -> Dict:
    index = normalize(index)
    entries = []
    for rep in conjugacy_classes(index, tol):
        residuals = verify_relations(rep, tol)
        entries.append({
            **rep.to_dict(),
            "residuals": residuals.to_dict(),
            "sl2r": [su11_to_sl2r(element, tol).tolist() for element in rep.q],
        })
    return {
        "index": format_index(index),
        "representations": entries,
        "passed": all(entry["residuals"]["passed"] for entry in entries),
    }


# =============================================================================
# Text rendering
# =============================================================================

def _class_text(record: Dict) -> str:
    return f"({record['b']}; {', '.join(str(c) for c in record['beta'])})"


def _coefficient_text(coefficient: Dict) -> str:
    text = f"{coefficient['rational']} · log2"
    if "decimal" in coefficient:
        text += f" ≈ {coefficient['decimal']}"
    return text


def info_lines(record: Dict) -> List[str]:
    lines = [
        f"Index: {record['index']}",
        f"Signature: genus {record['signature']['genus']}, cone orders {record['signature']['alpha']}",
        f"Orbifold Euler characteristic: {record['chi']}",
        f"Euler class: {_class_text(record['euler_class'])}",
        f"Unit tangent bundle of the base: {record['unit_tangent_bundle']}",
        "",
        f"pi_1(M) generators: {', '.join(record['pi1']['generators'])}",
    ]
    lines.extend(f"  {relator} = 1" for relator in record['pi1']['relators'])
    lines.extend(f"  ({note})" for note in record['pi1']['annotations'])
    lines.append(f"Gamma generators: {', '.join(record['fuchsian']['generators'])}")
    lines.extend(f"  {relator} = 1" for relator in record['fuchsian']['relators'])
    return lines


def reverse_lines(record: Dict) -> List[str]:
    return [record['reversed']]


def euler_check_lines(record: Dict) -> List[str]:
    verdict = "✓ realizable" if record['realizable'] else "✗ not realizable"
    lines = [
        f"Class {_class_text(record['class'])}: {verdict}",
        f"  sum beta_j/alpha_j = {record['sum']}",
    ]
    if record['cases']:
        lines.append(f"  cases: {', '.join(record['cases'])}")
    if record['flags']:
        lines.append(f"  ⚠ flags: {', '.join(record['flags'])}")
    return lines


def lifts_lines(record: Dict) -> List[str]:
    lifts = record['equivalent_realizable']
    lines = [f"Class {_class_text(record['class'])}: {len(lifts)} realizable lift(s)"]
    for lift, coefficient in zip(lifts, record['coefficients']):
        lines.append(f"  {_class_text(lift)}  {_coefficient_text(coefficient)}")
    if not record['induces_sl2r']:
        lines.append("  ✗ no SL(2,R)-representation with h -> -I")
    return lines


def asym_lines(record: Dict) -> List[str]:
    lines = [
        f"lambdas: {record['lambdas']}",
        f"coefficient: {_coefficient_text(record['coefficient'])}",
        f"(2N)^2 limit: {record['quadratic_limit']}",
    ]
    if record['minus_chi_log2']:
        lines.append("  = -chi log2")
    if record['flags']:
        lines.append(f"  ⚠ flags: {', '.join(record['flags'])}")
    return lines


def su11_enum_lines(record: Dict) -> List[str]:
    lines = [f"{len(record['k_triples'])} triple(s), {record['count']} class(es)"]
    for triple in record['classes']:
        sign = "+" if triple['epsilon'] > 0 else "-"
        lines.append(f"  k = {tuple(triple['k'])}, epsilon = {sign}")
    lines.extend(f"  ⚠ {note}" for note in record['notes'])
    return lines


def su11_verify_lines(record: Dict) -> List[str]:
    lines = []
    for entry in record['representations']:
        residuals = entry['residuals']
        mark = "✓" if residuals['passed'] else "✗"
        worst = max(residuals['powers'] + [residuals['product']] + residuals['traces'] + residuals['norms'])
        triple = entry['triple']
        lines.append(f"{mark} k = {tuple(triple['k'])}, epsilon = {triple['epsilon']:+d}: max residual {worst:.2e}")
    if not lines:
        lines.append("No irreducible representations")
    return lines


# =============================================================================
# Shared command plumbing
# =============================================================================

def input_options(func):
    """INDEX argument or --batch, plus output flags shared by every subcommand."""
    func = click.argument('index', type=IndexInput(), required=False)(func)
    func = click.option(
        '--batch',
        'batch_file',
        default=None,
        type=click.Path(exists=True, dir_okay=False),
        help='File with one index per line (# comments allowed); emits JSON lines'
    )(func)
    func = click.option(
        '--json',
        'as_json',
        is_flag=True,
        default=False,
        help='Emit a single-line JSON record instead of text'
    )(func)
    func = click.option(
        '--workers',
        default=None,
        type=click.IntRange(min=1),
        help='Worker threads for --batch (default: config batch.workers)'
    )(func)
    func = click.option(
        '--output',
        '-o',
        default=None,
        type=click.Path(dir_okay=False),
        help='Write the report to a file instead of stdout'
    )(func)
    return func


def tolerance_option(func):
    return click.option(
        '--tol',
        default=None,
        type=float,
        help='Numerical tolerance (default: config numerics.tolerance, 1e-9)'
    )(func)


def precision_options(func):
    func = click.option(
        '--decimal',
        is_flag=True,
        default=False,
        help='Add a decimal rendering of the coefficient'
    )(func)
    func = click.option(
        '--precision',
        default=None,
        type=click.IntRange(min=1),
        help='Significant digits of the decimal rendering (implies --decimal)'
    )(func)
    return func


def resolve_precision(decimal: bool, precision: Optional[int], config: dict) -> Optional[int]:
    """Decimal digits with priority: --precision > config (when --decimal) > none."""
    if precision is not None:
        return precision
    if decimal:
        return config['numerics']['decimal_precision']
    return None


def emit(
    build: Callable[[SeifertIndex], Dict],
    render: Callable[[Dict], List[str]],
    index: Optional[SeifertIndex],
    batch_file: Optional[str],
    as_json: bool,
    workers: Optional[int],
    output: Optional[str],
):
    """
    Run one subcommand over a single index or a batch file and write the result.

    Args:
        build: Record builder for one index
        render: Text renderer for one record
        index: Parsed INDEX argument (or None)
        batch_file: Path given with --batch (or None)
        as_json: --json flag
        workers: --workers value (or None for the config default)
        output: --output path (or None for stdout)
    """
    if (index is None) == (batch_file is None):
        raise click.UsageError("Give exactly one of INDEX or --batch FILE.")

    config = click.get_current_context().obj['config']
    writer = ReportWriter()

    try:
        if batch_file is not None:
            entries = ReportWriter.parse_batch(batch_file)
            runner = BatchRunner(
                lambda text: build(parse_index(text)),
                workers=workers or config['batch']['workers'],
            )
            records = runner.run(entries)
            content = writer.write_jsonl(records, output)
            if output:
                failed = sum(1 for record in records if 'error' in record)
                click.echo(f"✓ {len(records)} record(s) written to {output} ({failed} error(s))", err=True)
            else:
                click.echo(content, nl=False)
            return

        record = build(index)
        if as_json or config['output']['format'] == 'json':
            content = writer.write_jsonl([record], output)
        else:
            content = writer.write_text(render(record), output)
        if output:
            click.echo(f"✓ Report written to {output}", err=True)
        else:
            click.echo(content, nl=False)

    except SeifertError as e:
        click.echo(f"❌ Error: {e}", err=True)
        sys.exit(1)
    except OSError as e:
        click.echo(f"❌ Error: {e}", err=True)
        sys.exit(1)


# =============================================================================
# Commands
# =============================================================================

@click.group()
@click.option('--verbose', '-v', is_flag=True, default=False, help='Log computation details to stderr')
@click.pass_context
def main(ctx, verbose):
    """
    Euler classes, realizability and torsion asymptotics of Seifert manifolds.

    Indices are written 'g; b; a1/b1, a2/b2, ...' in the Jankins-Neumann
    sign convention.

    \b
    Examples:
      python main.py info "0; -1; 2/1, 3/1, 7/1"
      python main.py asym "0; -1; 2/1, 3/1, 7/1"
      python main.py su11-enum "0; -1; 2/1, 3/1, 7/1" --json
      python main.py euler-check --batch indices.txt -o results.jsonl
    """
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )
    ctx.ensure_object(dict)
    ctx.obj['config'] = load_config()


@main.command()
@input_options
def info(index, batch_file, as_json, workers, output):
    """Normalized index, base orbifold, euler class and presentations."""
    emit(info_record, info_lines, index, batch_file, as_json, workers, output)


@main.command()
@input_options
def reverse(index, batch_file, as_json, workers, output):
    """Normalized index of the manifold with the fiber orientation reversed."""
    emit(reverse_record, reverse_lines, index, batch_file, as_json, workers, output)


@main.command('euler-check')
@input_options
def euler_check(index, batch_file, as_json, workers, output):
    """Jankins-Neumann realizability of the index's euler class."""
    emit(euler_check_record, euler_check_lines, index, batch_file, as_json, workers, output)


@main.command()
@input_options
@precision_options
@tolerance_option
@click.pass_obj
def lifts(obj, index, batch_file, as_json, workers, output, decimal, precision, tol):
    """Realizable classes in the Ext(Gamma; Z/2Z) class of the euler class."""
    digits = resolve_precision(decimal, precision, obj['config'])
    tol = tol if tol is not None else obj['config']['numerics']['tolerance']
    build = functools.partial(lifts_record, precision=digits, tol=tol)
    emit(build, lifts_lines, index, batch_file, as_json, workers, output)


@main.command()
@input_options
@precision_options
@click.option(
    '--alt',
    default=None,
    help="Alternative realizable class 'b; c1, c2, ...' in the same Ext(Gamma; Z/2Z) class"
)
@tolerance_option
@click.pass_obj
def asym(obj, index, batch_file, as_json, workers, output, decimal, precision, alt, tol):
    """Leading coefficient of log|Tor(M; rho_2N)| / (2N) as a multiple of log 2."""
    digits = resolve_precision(decimal, precision, obj['config'])
    tol = tol if tol is not None else obj['config']['numerics']['tolerance']
    build = functools.partial(asym_record, precision=digits, alt=alt, tol=tol)
    emit(build, asym_lines, index, batch_file, as_json, workers, output)


@main.command('su11-enum')
@input_options
@tolerance_option
@click.pass_obj
def su11_enum(obj, index, batch_file, as_json, workers, output, tol):
    """Irreducible SU(1,1)-representation classes with h -> -I (genus 0, three fibers)."""
    tol = tol if tol is not None else obj['config']['numerics']['tolerance']
    build = functools.partial(su11_enum_record, tol=tol)
    emit(build, su11_enum_lines, index, batch_file, as_json, workers, output)


@main.command('su11-verify')
@input_options
@tolerance_option
@click.pass_obj
def su11_verify(obj, index, batch_file, as_json, workers, output, tol):
    """Construct every class and check all relations of pi_1(M) numerically."""
    tol = tol if tol is not None else obj['config']['numerics']['tolerance']
    build = functools.partial(su11_verify_record, tol=tol)
    emit(build, su11_verify_lines, index, batch_file, as_json, workers, output)


if __name__ == '__main__':
    main()
