"""Command-line surface for the training / prediction / analysis pipeline.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal
invariant violation.  Errors are emitted as JSON on stderr so callers
can parse them.  All commands are reproducible given identical inputs,
flags and seed (with --threads 1).
"""
from __future__ import annotations

import json
import sys
import time

import click
import toml

from . import __version__
from .baselines import (
    dfa_ft_from_json,
    dfa_ft_predict_prefixes,
    dfa_ft_to_json,
    dfa_ft_train,
    ngram_from_json,
    ngram_predict_prefixes,
    ngram_to_json,
    ngram_train,
)
from .dfa import extract_regex, from_json_dict, to_dot, to_json
from .errors import DataError, InternalError, SeqDfaError
from .inference import class_dfa, ensemble_from_json, ensemble_to_json, estimate_likelihoods, predict_prefixes
from .interpret import (
    check_dataset_consistency,
    counterfactual_explain,
    modify_classifier,
    narrate,
    out_of_vocabulary_ops,
    property_template,
    verify_property,
)
from .learn import (
    LAMBDA_EDGE_GRID,
    HyperParams,
    StateLayout,
    build_program,
    export_lp,
    train_class_with_grid,
)
from .metrics import UtilityFunction, evaluation_report, multilabel_accuracy, multilabel_predict
from .office import PathFixture, FixtureEntry, default_office_fixture, gen_office
from .prefix_tree import build_prefix_tree
from .traces import (
    LabeledDataset,
    binarize,
    load_dataset,
    load_multilabel_dataset,
    split_train_validation,
)


@click.group()
@click.version_option(version=__version__, prog_name="seqdfa")
def cli():
    """Learn, query, and analyze DFA sequence classifiers."""


def _config_defaults(config_path):
    if not config_path:
        return {}
    try:
        return toml.load(config_path)
    except (OSError, toml.TomlDecodeError) as exc:
        raise DataError(f"cannot read config {config_path}: {exc}") from None


def _resolved(ctx, config, name, value):
    """CLI flag wins over config file wins over the click default."""
    source = ctx.get_parameter_source(name)
    if source is not None and source.name != "DEFAULT":
        return value
    key = name.replace("_", "-")
    if key in config:
        return config[key]
    if name in config:
        return config[name]
    return value


def _parse_accepting(text):
    if not text:
        return None
    try:
        return tuple(int(part) for part in text.split(",") if part.strip() != "")
    except ValueError:
        raise DataError(f"invalid accepting-state list: {text!r}") from None


def _load_model_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read model file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid model JSON in {path}: {exc.msg}") from None
    kind = payload.get("model_type") if isinstance(payload, dict) else None
    if kind == "ensemble":
        return "ensemble", ensemble_from_json(json.dumps(payload))
    if kind == "dfa-ft":
        return "dfa-ft", dfa_ft_from_json(json.dumps(payload))
    if kind in ("ngram1", "ngram2"):
        return kind, ngram_from_json(json.dumps(payload))
    return "dfa", from_json_dict(payload)


def _pick_dfa(model_kind, model, class_name):
    if model_kind == "dfa":
        return model
    if model_kind != "ensemble":
        raise DataError(f"a {model_kind} model has no per-class DFA")
    if not class_name:
        raise click.UsageError("--class is required for ensemble models")
    return class_dfa(model, class_name)


def _trace_from_text(alphabet, text):
    symbols = text.split()
    if not symbols:
        raise DataError("empty trace")
    return alphabet.encode(symbols)


def _read_trace_file(path, alphabet):
    """Read a JSONL file of {'trace': [...]} records (labels optional)."""
    traces = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(obj, dict) or "trace" not in obj:
                raise DataError(f"{path}:{lineno}: record needs a 'trace' field")
            traces.append(alphabet.encode(obj["trace"]))
    if not traces:
        raise DataError(f"{path}: no records")
    return traces


def _prefix_table(model_kind, model, traces):
    """Per-trace (class name, confidence) after each observation."""
    table = []
    for trace in traces:
        if model_kind == "ensemble":
            posteriors = predict_prefixes(model, trace)
            row = []
            for post in posteriors:
                best = max(range(len(post.probabilities)), key=lambda c: (post.probabilities[c], -c))
                row.append((model.classes[best], post.probabilities[best]))
        elif model_kind == "dfa-ft":
            row = dfa_ft_predict_prefixes(model, trace)
        else:
            row = ngram_predict_prefixes(model, trace)
        table.append(row)
    return table


@cli.command("gen-office")
@click.option("--out", required=True, type=click.Path(dir_okay=False, writable=True))
@click.option("--fixture", "fixture_path", type=click.Path(exists=True, dir_okay=False),
              help="Custom fixture JSON; defaults to the bundled floor plan.")
def gen_office_cmd(out, fixture_path):
    """Write the synthetic office dataset as JSONL."""
    if fixture_path:
        with open(fixture_path, "r", encoding="utf-8") as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise DataError(f"invalid fixture JSON: {exc.msg}") from None
        try:
            fixture = PathFixture(tuple(
                FixtureEntry(e["start"], e["goal"], tuple(tuple(p) for p in e["paths"]))
                for e in raw
            ))
        except (KeyError, TypeError) as exc:
            raise DataError(f"invalid fixture structure: {exc}") from None
    else:
        fixture = default_office_fixture()
    count = gen_office(fixture, out)
    click.echo(json.dumps({"written": count, "path": out}))


@cli.command("train")
@click.option("--data", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "data_format", default="jsonl", type=click.Choice(["jsonl", "csv"]))
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--model-type", default="ensemble",
              type=click.Choice(["ensemble", "dfa-ft", "ngram1", "ngram2"]))
@click.option("--qmax", default=5, type=int)
@click.option("--lambda-edge", "lambda_edges", multiple=True, type=float,
              help="Transition-penalty value; repeat for a custom grid "
                   "(default: the 11-point log grid).")
@click.option("--lambda-absorb", default=0.001, type=float)
@click.option("--lambda-pos", default=1.0, type=float)
@click.option("--lambda-neg", default=1.0, type=float)
@click.option("--balanced", is_flag=True, default=False,
              help="Scale the positive-misclassification weight per class by "
                   "the negative/positive weight ratio of its tree.")
@click.option("--time-limit", default=900.0, type=float)
@click.option("--threads", default=1, type=int)
@click.option("--seed", default=0, type=int)
@click.option("--val-fraction", default=0.2, type=float)
@click.option("--smoothing", default=0.5, type=float)
@click.option("--alpha", default=0.5, type=float, help="n-gram smoothing constant.")
@click.option("--uniform-prior", is_flag=True, default=False)
@click.option("--accepting", default="", help="Comma-separated accepting state ids override.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="TOML config; explicit flags override it.")
@click.pass_context
def train_cmd(ctx, data, data_format, out_dir, model_type, qmax, lambda_edges,
              lambda_absorb, lambda_pos, lambda_neg, balanced, time_limit,
              threads, seed, val_fraction, smoothing, alpha, uniform_prior,
              accepting, config_path):
    """Train a classifier and write model.json plus manifest.json."""
    import os

    config = _config_defaults(config_path)
    qmax = int(_resolved(ctx, config, "qmax", qmax))
    lambda_absorb = float(_resolved(ctx, config, "lambda_absorb", lambda_absorb))
    lambda_pos = float(_resolved(ctx, config, "lambda_pos", lambda_pos))
    lambda_neg = float(_resolved(ctx, config, "lambda_neg", lambda_neg))
    time_limit = float(_resolved(ctx, config, "time_limit", time_limit))
    threads = int(_resolved(ctx, config, "threads", threads))
    seed = int(_resolved(ctx, config, "seed", seed))
    val_fraction = float(_resolved(ctx, config, "val_fraction", val_fraction))
    smoothing = float(_resolved(ctx, config, "smoothing", smoothing))
    alpha = float(_resolved(ctx, config, "alpha", alpha))
    accepting = _parse_accepting(_resolved(ctx, config, "accepting", accepting))
    if not lambda_edges and "lambda-edge" in config:
        grid = tuple(float(v) for v in config["lambda-edge"])
    else:
        grid = tuple(lambda_edges) if lambda_edges else LAMBDA_EDGE_GRID

    t_start = time.monotonic()
    dataset = load_dataset(data, data_format)
    os.makedirs(out_dir, exist_ok=True)
    model_path = os.path.join(out_dir, "model.json")
    manifest_path = os.path.join(out_dir, "manifest.json")
    per_class_info = {}

    if model_type == "ensemble":
        if val_fraction == 0:
            # tiny-data mode: no held-out split; selection and likelihood
            # estimation fall back to the training traces
            train_ds = dataset
            val_ds = LabeledDataset(dataset.alphabet, (), dataset.classes)
        else:
            split = split_train_validation(dataset, val_fraction, seed)
            train_ds, val_ds = split.train, split.validation
        hp = HyperParams(
            q_max=qmax, lam_absorb=lambda_absorb, lam_pos=lambda_pos,
            lam_neg=lambda_neg, balanced=balanced, time_limit=time_limit,
            threads=threads, seed=seed, accepting_states=accepting,
        )
        targets = range(len(dataset.classes))
        if threads > 1:
            # per-class problems are independent; results are identical to a
            # sequential run, only the wall time changes
            from concurrent.futures import ProcessPoolExecutor
            from functools import partial
            task = partial(train_class_with_grid, train_ds, val_ds, hp=hp, grid=grid)
            with ProcessPoolExecutor(max_workers=threads) as pool:
                trained_classes = list(pool.map(task, targets))
        else:
            trained_classes = [train_class_with_grid(train_ds, val_ds, c, hp, grid)
                               for c in targets]
        dfas = []
        for name, trained in zip(dataset.classes, trained_classes):
            dfas.append(trained.model)
            per_class_info[name] = {
                "lambda_edge": trained.lam_edge,
                "status": trained.status,
                "selection_f1": trained.validation_f1,
            }
        likelihood_ds = val_ds if len(val_ds) else train_ds
        ensemble = estimate_likelihoods(
            dataset.classes, dfas, train_ds, likelihood_ds,
            smoothing=smoothing, uniform_prior=uniform_prior,
        )
        metadata = {
            "hyperparams": {
                "q_max": qmax, "lambda_edge_grid": list(grid),
                "lambda_absorb": lambda_absorb, "lambda_pos": lambda_pos,
                "lambda_neg": lambda_neg, "val_fraction": val_fraction,
                "smoothing": smoothing, "uniform_prior": uniform_prior,
                "time_limit": time_limit,
            },
            "seed": seed,
            "per_class": per_class_info,
        }
        model_text = ensemble_to_json(ensemble, metadata)
    elif model_type == "dfa-ft":
        model_text = dfa_ft_to_json(dfa_ft_train(dataset))
    else:
        n = 1 if model_type == "ngram1" else 2
        model_text = ngram_to_json(ngram_train(dataset, n, alpha))

    with open(model_path, "w", encoding="utf-8") as fh:
        fh.write(model_text + "\n")
    manifest = {
        "tool": "seqdfa",
        "version": __version__,
        "command": "train",
        "model_type": model_type,
        "data": data,
        "seed": seed,
        "flags": {
            "qmax": qmax, "lambda_edge_grid": list(grid),
            "lambda_absorb": lambda_absorb, "lambda_pos": lambda_pos,
            "lambda_neg": lambda_neg, "balanced": balanced,
            "time_limit": time_limit, "threads": threads,
            "val_fraction": val_fraction, "smoothing": smoothing,
            "alpha": alpha, "uniform_prior": uniform_prior,
        },
        "per_class": per_class_info,
        "timings": {"total_seconds": time.monotonic() - t_start},
        "python": sys.version.split()[0],
    }
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    click.echo(json.dumps({"model": model_path, "manifest": manifest_path}))


@cli.command("predict")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--trace", "trace_text", default=None, help="Space-separated symbols.")
@click.option("--data", "data_path", default=None, type=click.Path(exists=True, dir_okay=False))
def predict_cmd(model_path, trace_text, data_path):
    """Emit per-prefix predictions (posteriors for ensemble models)."""
    if (trace_text is None) == (data_path is None):
        raise click.UsageError("provide exactly one of --trace or --data")
    model_kind, model = _load_model_file(model_path)
    if model_kind == "dfa":
        raise DataError("predict needs a trained classifier, not a bare DFA")
    alphabet = model.alphabet
    if trace_text is not None:
        traces = [_trace_from_text(alphabet, trace_text)]
    else:
        traces = _read_trace_file(data_path, alphabet)

    results = []
    for trace in traces:
        entry = {"trace": list(alphabet.decode(trace))}
        if model_kind == "ensemble":
            posteriors = predict_prefixes(model, trace)
            entry["prefixes"] = [
                {
                    "posterior": post.as_dict(model.classes),
                    "decisions": {c: bool(d) for c, d in zip(model.classes, post.decisions)},
                }
                for post in posteriors
            ]
        row = _prefix_table(model_kind, model, [trace])[0]
        entry["prefix_predictions"] = [
            {"class": name, "confidence": conf} for name, conf in row
        ]
        entry["prediction"] = row[-1][0]
        entry["confidence"] = row[-1][1]
        results.append(entry)
    click.echo(json.dumps({"results": results}, indent=2))


@cli.command("evaluate")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--data", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "data_format", default="jsonl", type=click.Choice(["jsonl", "csv"]))
@click.option("--report", "report_path", default=None, type=click.Path(dir_okay=False))
@click.option("--per-trace-csv", default=None, type=click.Path(dir_okay=False))
@click.option("--multi-label", is_flag=True, default=False)
@click.option("--utility-horizon", default=40, type=int)
def evaluate_cmd(model_path, data, data_format, report_path, per_trace_csv,
                 multi_label, utility_horizon):
    """Score a model on a labeled dataset (CCA, PCA, early utility)."""
    model_kind, model = _load_model_file(model_path)
    if model_kind == "dfa":
        raise DataError("evaluate needs a trained classifier, not a bare DFA")

    if multi_label:
        if model_kind != "ensemble":
            raise DataError("multi-label evaluation requires an ensemble model")
        ml = load_multilabel_dataset(data)
        dfas = {c: class_dfa(model, c) for c in model.classes if c in ml.classes}
        model_alphabet = model.alphabet
        predicted = []
        truth = []
        for trace, label_ids in ml.items:
            recoded = model_alphabet.encode(ml.alphabet.decode(trace))
            predicted.append(multilabel_predict(dfas, recoded))
            truth.append({ml.classes[i] for i in label_ids})
        per_label, mean = multilabel_accuracy(predicted, truth, sorted(dfas))
        report = {"per_label_accuracy": per_label, "mean_accuracy": mean}
    else:
        dataset = load_dataset(data, data_format)
        alphabet = model.alphabet
        traces = [alphabet.encode(dataset.alphabet.decode(trace)) for trace, _ in dataset.items]
        model_classes = list(model.classes)
        labels = []
        for _, label in dataset.items:
            name = dataset.classes[label]
            if name not in model_classes:
                raise DataError(f"dataset class {name!r} unknown to the model")
            labels.append(model_classes.index(name))
        table = _prefix_table(model_kind, model, traces)
        id_table = [[(model_classes.index(name), conf) for name, conf in row] for row in table]
        report = evaluation_report(
            id_table, labels, model_classes, UtilityFunction(utility_horizon))
        if per_trace_csv:
            with open(per_trace_csv, "w", encoding="utf-8") as fh:
                fh.write("trace_id,t,predicted,confidence,label\n")
                for i, row in enumerate(table):
                    for t, (name, conf) in enumerate(row, start=1):
                        fh.write(f"{i},{t},{name},{conf!r},{model_classes[labels[i]]}\n")

    text = json.dumps(report, indent=2, sort_keys=True)
    if report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        click.echo(json.dumps({"report": report_path}))
    else:
        click.echo(text)


@cli.command("explain")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--class", "class_name", default=None)
@click.option("--trace", "trace_text", required=True)
@click.option("--vocabulary", default=None,
              help="Comma-separated explanation vocabulary; ops outside it are flagged.")
def explain_cmd(model_path, class_name, trace_text, vocabulary):
    """Counterfactual explanation for a rejected trace."""
    model_kind, model = _load_model_file(model_path)
    dfa = _pick_dfa(model_kind, model, class_name)
    trace = _trace_from_text(dfa.alphabet, trace_text)
    explanation = counterfactual_explain(dfa, trace)
    ops = []
    for op in explanation.ops:
        entry = {"kind": op.kind, "position": op.position}
        if op.old_symbol is not None:
            entry["old"] = dfa.alphabet.symbols[op.old_symbol]
        if op.new_symbol is not None:
            entry["new"] = dfa.alphabet.symbols[op.new_symbol]
        ops.append(entry)
    payload = {
        "distance": explanation.distance,
        "ops": ops,
        "target": list(dfa.alphabet.decode(explanation.target_trace)),
        "sentence": narrate(explanation, dfa.alphabet),
    }
    if vocabulary:
        vocab = [s for s in vocabulary.split(",") if s]
        payload["out_of_vocabulary_ops"] = list(
            out_of_vocabulary_ops(explanation, dfa.alphabet, vocab))
    click.echo(json.dumps(payload, indent=2))


def _criterion_from_flags(dfa, template, symbols, criterion_file):
    if (template is None) == (criterion_file is None):
        raise click.UsageError("provide exactly one of --template or --criterion-file")
    if template:
        names = [s for s in (symbols or "").split(",") if s]
        if not names:
            raise click.UsageError("--symbols is required with --template")
        return property_template(template, dfa.alphabet, names)
    with open(criterion_file, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    criterion = from_json_dict(payload)
    if criterion.alphabet.symbols != dfa.alphabet.symbols:
        raise DataError("criterion alphabet does not match the classifier alphabet")
    return criterion


@cli.command("verify")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--class", "class_name", default=None)
@click.option("--template", default=None, type=click.Choice(["eventually", "never", "precedes"]))
@click.option("--symbols", default=None, help="Comma-separated symbols for the template.")
@click.option("--criterion-file", default=None, type=click.Path(exists=True, dir_okay=False))
def verify_cmd(model_path, class_name, template, symbols, criterion_file):
    """Check that every accepted trace satisfies a property automaton."""
    model_kind, model = _load_model_file(model_path)
    dfa = _pick_dfa(model_kind, model, class_name)
    prop = _criterion_from_flags(dfa, template, symbols, criterion_file)
    result = verify_property(dfa, prop)
    if result.holds:
        click.echo(json.dumps({"holds": True}))
    else:
        witness = list(dfa.alphabet.decode(result.witness))
        click.echo(json.dumps({"holds": False, "witness": witness}))


@cli.command("modify")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--class", "class_name", default=None)
@click.option("--template", default=None, type=click.Choice(["eventually", "never", "precedes"]))
@click.option("--symbols", default=None)
@click.option("--criterion-file", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--data", default=None, type=click.Path(exists=True, dir_okay=False),
              help="Training data to check the modified classifier against.")
@click.option("--format", "data_format", default="jsonl", type=click.Choice(["jsonl", "csv"]))
@click.option("--out", required=True, type=click.Path(dir_okay=False, writable=True))
def modify_cmd(model_path, class_name, template, symbols, criterion_file, data,
               data_format, out):
    """Intersect a classifier with a criterion and report dataset conflicts."""
    model_kind, model = _load_model_file(model_path)
    dfa = _pick_dfa(model_kind, model, class_name)
    criterion = _criterion_from_flags(dfa, template, symbols, criterion_file)
    modified = modify_classifier(dfa, criterion)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(to_json(modified) + "\n")
    payload = {"modified": out, "n_states": modified.n_states}
    if data:
        dataset = load_dataset(data, data_format)
        if class_name is None or class_name not in dataset.classes:
            raise DataError("--class naming a dataset class is required with --data")
        recoded = LabeledDataset(
            alphabet=dfa.alphabet,
            items=tuple((dfa.alphabet.encode(dataset.alphabet.decode(t)), l)
                        for t, l in dataset.items),
            classes=dataset.classes,
        )
        report = check_dataset_consistency(modified, recoded, dataset.class_id(class_name))
        payload["consistency"] = {
            "target": report.target,
            "total_positive": report.total_positive,
            "rejected_count": report.rejected_count,
            "rejected_trace_ids": list(report.rejected_trace_ids),
        }
    click.echo(json.dumps(payload, indent=2))


@cli.command("export")
@click.option("--format", "export_format", required=True,
              type=click.Choice(["dot", "regex", "json", "lp"]))
@click.option("--model", "model_path", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--class", "class_name", default=None)
@click.option("--data", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--data-format", default="jsonl", type=click.Choice(["jsonl", "csv"]))
@click.option("--qmax", default=5, type=int)
@click.option("--lambda-edge", default=0.0, type=float)
@click.option("--lambda-absorb", default=0.001, type=float)
@click.option("--lambda-pos", default=1.0, type=float)
@click.option("--lambda-neg", default=1.0, type=float)
@click.option("--weighting", default="length_normalized",
              type=click.Choice(["length_normalized", "raw"]))
@click.option("--accepting", default="")
@click.option("--out", default=None, type=click.Path(dir_okay=False, writable=True))
def export_cmd(export_format, model_path, class_name, data, data_format, qmax,
               lambda_edge, lambda_absorb, lambda_pos, lambda_neg, weighting,
               accepting, out):
    """Export a model (dot/regex/json) or an optimization instance (lp)."""
    if export_format == "lp":
        if not data or not class_name:
            raise click.UsageError("--format lp requires --data and --class")
        dataset = load_dataset(data, data_format)
        target = dataset.class_id(class_name)
        binarized = binarize(dataset, target)
        tree = build_prefix_tree(binarized, dataset.alphabet, weighting=weighting)
        layout = StateLayout.default(qmax, _parse_accepting(accepting))
        program = build_program(tree, layout, lambda_edge, lambda_absorb,
                                lambda_pos, lambda_neg)
        text = export_lp(program)
    else:
        if not model_path:
            raise click.UsageError(f"--format {export_format} requires --model")
        model_kind, model = _load_model_file(model_path)
        dfa = _pick_dfa(model_kind, model, class_name)
        if export_format == "dot":
            text = to_dot(dfa) + "\n"
        elif export_format == "regex":
            text = extract_regex(dfa) + "\n"
        else:
            text = to_json(dfa) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        click.echo(json.dumps({"written": out}))
    else:
        click.echo(text, nl=False)


def _emit_error(kind, message):
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:  # --help, --version
        return exc.exit_code
    except click.UsageError as exc:
        _emit_error("usage", exc.format_message())
        return 1
    except click.ClickException as exc:
        _emit_error("usage", exc.format_message())
        return 1
    except InternalError as exc:
        _emit_error("internal", str(exc))
        return 3
    except (DataError, SeqDfaError) as exc:
        _emit_error("data", str(exc))
        return 2
    except OSError as exc:
        _emit_error("data", str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
