"""``reasoner`` command line: staged pipeline over files in an artifact directory."""

from __future__ import annotations

import argparse
import json
import logging
import os
import statistics
import sys
import time

from .collect import PathStore, collect_paths, collect_paths_random_walk
from .config import ConfigError, load_config
from .distance import DistanceIndex, build_distance_index
from .estimator import training_triples
from .evaluate import evaluate
from .kg import DatasetError, load_dataset, save_vocabularies
from .reasoner import Query, answer_query, explain
from .stats import (
    JointStats,
    RelationPathStats,
    compute_joint_probabilities,
    compute_path_probabilities,
)

logger = logging.getLogger("pathreason")

EXIT_OK, EXIT_USAGE, EXIT_MISSING = 0, 1, 2

DISTANCES = "distances.tsv.gz"
PATHS = "paths.tsv"
PATH_STATS = "path_stats.tsv"
JOINT_STATS = "joint_stats.tsv"


class MissingArtifact(Exception):
    def __init__(self, path, stage):
        super().__init__(f"missing {path}; run `reasoner {stage}` first")


class IncompatibleArtifact(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="reasoner", description=__doc__)
    parser.add_argument("subcommand",
                        choices=["preprocess", "collect", "stats", "eval", "query", "bench"])
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("--dataset", help="directory with train/valid/test.txt")
    parser.add_argument("--artifacts", help="artifact directory")
    parser.add_argument("--type-map", dest="type_map")
    parser.add_argument("--k", type=int)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--beta", type=float)
    parser.add_argument("--ntop", dest="n_top", type=int)
    parser.add_argument("--minter", dest="m_inter", type=int)
    parser.add_argument("--lmax", dest="l_max", type=int)
    parser.add_argument("--mode", choices=["dg", "rw"])
    parser.add_argument("--walks", dest="walks_per_triple", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--threads", type=int)
    parser.add_argument("--count-mode", dest="count_mode", choices=["walks", "entities"])
    parser.add_argument("--repeats", type=int)
    parser.add_argument("--raw", dest="filtered", action="store_const", const=False)
    parser.add_argument("--both-directions", dest="both_directions",
                        action="store_const", const=True)
    parser.add_argument("--no-intra", dest="no_intra", action="store_const", const=True)
    parser.add_argument("--no-inter", dest="no_inter", action="store_const", const=True)
    parser.add_argument("--include-target-edge", dest="exclude_target_edge",
                        action="store_const", const=False)
    parser.add_argument("--head", help="query head entity name")
    parser.add_argument("--relation", help="query relation name")
    parser.add_argument("--top", type=int, default=10, help="candidates shown by `query`")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


CONFIG_KEYS = ("dataset", "artifacts", "type_map", "k", "alpha", "beta", "n_top", "m_inter",
               "l_max", "mode", "walks_per_triple", "seed", "threads", "count_mode",
               "repeats", "filtered", "both_directions", "no_intra", "no_inter",
               "exclude_target_edge")


def _require(cfg, name, stage):
    path = os.path.join(cfg.artifacts, name)
    if not os.path.isfile(path):
        raise MissingArtifact(path, stage)
    return path


def _check_l_max(meta, cfg, path, exact=True):
    built = int(meta.get("l_max", meta.get("store_l_max", -1)))
    if (exact and built != cfg.l_max) or (not exact and built < cfg.l_max):
        raise IncompatibleArtifact(
            f"{path} was built with l_max={built}, configuration asks for l_max={cfg.l_max}")


def _load(cfg):
    if not cfg.dataset:
        raise ConfigError("dataset is not set (use --dataset or `dataset =` in the config file)")
    kg, splits = load_dataset(cfg.dataset, cfg.type_map or None)
    return kg, splits


def _triples(cfg, kg):
    return training_triples(kg, cfg.both_directions)


def cmd_preprocess(cfg):
    kg, _ = _load(cfg)
    os.makedirs(cfg.artifacts, exist_ok=True)
    save_vocabularies(kg, cfg.artifacts)
    index = build_distance_index(kg, cfg.l_max)
    index.save(os.path.join(cfg.artifacts, DISTANCES))
    print(f"distance index: {kg.n_entities} entities, {len(index)} entries, l_max={cfg.l_max}")


def _collect(cfg, kg, index=None):
    triples = _triples(cfg, kg)
    if cfg.mode == "rw":
        return collect_paths_random_walk(kg, cfg.l_max, cfg.walks_per_triple, cfg.seed,
                                         triples, cfg.exclude_target_edge, cfg.threads)
    return collect_paths(kg, index, cfg.l_max, cfg.k, triples, cfg.exclude_target_edge,
                         cfg.threads)


def cmd_collect(cfg):
    kg, _ = _load(cfg)
    index = None
    if cfg.mode == "dg":
        path = _require(cfg, DISTANCES, "preprocess")
        index = DistanceIndex.load(path)
        _check_l_max({"l_max": index.l_max}, cfg, path, exact=False)
    store = _collect(cfg, kg, index)
    store.meta["both_directions"] = str(int(cfg.both_directions))
    os.makedirs(cfg.artifacts, exist_ok=True)
    store.save(os.path.join(cfg.artifacts, PATHS), kg)
    print(f"collected {len(store)} type-specific paths ({cfg.mode})")


def cmd_stats(cfg):
    kg, _ = _load(cfg)
    path = _require(cfg, PATHS, "collect")
    store = PathStore.load(path, kg)
    _check_l_max(store.meta, cfg, path)
    triples = _triples(cfg, kg)
    if store:
        stats = compute_path_probabilities(kg, store, triples, cfg.exclude_target_edge,
                                           cfg.count_mode)
    else:
        stats = RelationPathStats(meta={f"store_{k}": v for k, v in store.meta.items()})
    joints = compute_joint_probabilities(kg, stats, cfg.alpha, cfg.m_inter, triples,
                                         cfg.exclude_target_edge)
    joints.meta["l_max"] = str(cfg.l_max)
    stats.save(os.path.join(cfg.artifacts, PATH_STATS), kg)
    joints.save(os.path.join(cfg.artifacts, JOINT_STATS), kg)
    print(f"path statistics: {len(stats)} paths, {len(joints)} joint pairs")


def _load_stats(cfg, kg):
    stats_path = _require(cfg, PATH_STATS, "stats")
    joints_path = _require(cfg, JOINT_STATS, "stats")
    stats = RelationPathStats.load(stats_path, kg)
    _check_l_max(stats.meta, cfg, stats_path)
    return stats, JointStats.load(joints_path, kg)


def cmd_eval(cfg):
    kg, splits = _load(cfg)
    stats, joints = _load_stats(cfg, kg)
    report = evaluate(kg, stats, joints, splits.test, cfg.reasoner(), known=splits.all(),
                      filtered=cfg.filtered, both_directions=cfg.both_directions)
    text = report.to_text()
    with open(os.path.join(cfg.artifacts, "metrics.txt"), "w", encoding="utf-8") as fh:
        fh.write(text + "\n")
    with open(os.path.join(cfg.artifacts, "metrics.kv"), "w", encoding="utf-8") as fh:
        fh.write(report.to_kv())
    with open(os.path.join(cfg.artifacts, "ranks.tsv"), "w", encoding="utf-8") as fh:
        fh.write(report.to_tsv(kg))
    print(text)


def cmd_query(cfg, head, relation, top):
    if not head or not relation:
        raise ConfigError("query needs --head and --relation")
    kg, _ = _load(cfg)
    stats, joints = _load_stats(cfg, kg)
    try:
        q = Query(kg.entity_id(head), kg.relation_id(relation))
    except KeyError as exc:
        raise ConfigError(f"unknown entity or relation: {exc.args[0]}") from None
    answers = answer_query(kg, stats, joints, q, cfg.reasoner())
    print(json.dumps(explain(kg, q, answers, top)))


def cmd_bench(cfg):
    kg, _ = _load(cfg)
    dg_times, rw_times = [], []
    dg = rw = None
    for _ in range(cfg.repeats):
        start = time.perf_counter()
        index = build_distance_index(kg, cfg.l_max)
        dg = collect_paths(kg, index, cfg.l_max, cfg.k, _triples(cfg, kg),
                           cfg.exclude_target_edge, cfg.threads)
        dg_times.append(time.perf_counter() - start)
        start = time.perf_counter()
        rw = collect_paths_random_walk(kg, cfg.l_max, cfg.walks_per_triple, cfg.seed,
                                       _triples(cfg, kg), cfg.exclude_target_edge, cfg.threads)
        rw_times.append(time.perf_counter() - start)
    dg_paths, rw_paths = dg.distinct(), rw.distinct()
    result = {
        "dg_seconds": statistics.median(dg_times),
        "rw_seconds": statistics.median(rw_times),
        "dg_paths": len(dg_paths),
        "rw_paths": len(rw_paths),
        "rw_coverage_of_dg": len(dg_paths & rw_paths) / len(dg_paths) if dg_paths else 1.0,
        "k": cfg.k,
        "walks_per_triple": cfg.walks_per_triple,
        "repeats": cfg.repeats,
    }
    result["speedup"] = result["rw_seconds"] / result["dg_seconds"]
    os.makedirs(cfg.artifacts, exist_ok=True)
    with open(os.path.join(cfg.artifacts, "bench.kv"), "w", encoding="utf-8") as fh:
        fh.writelines(f"{k} = {v!r}\n" for k, v in result.items())
    print(f"distance-guided: {result['dg_seconds']:.2f}s  random-walk: "
          f"{result['rw_seconds']:.2f}s  speedup: {result['speedup']:.2f}x  "
          f"(rw covers {100 * result['rw_coverage_of_dg']:.1f}% of dg paths)")
    return result


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    try:
        overrides = {key: getattr(args, key) for key in CONFIG_KEYS}
        cfg = load_config(args.config, overrides)
        if args.subcommand == "preprocess":
            cmd_preprocess(cfg)
        elif args.subcommand == "collect":
            cmd_collect(cfg)
        elif args.subcommand == "stats":
            cmd_stats(cfg)
        elif args.subcommand == "eval":
            cmd_eval(cfg)
        elif args.subcommand == "query":
            cmd_query(cfg, args.head, args.relation, args.top)
        else:
            cmd_bench(cfg)
    except (ConfigError, DatasetError, FileNotFoundError) as exc:
        print(f"reasoner: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MissingArtifact, IncompatibleArtifact) as exc:
        print(f"reasoner: error: {exc}", file=sys.stderr)
        return EXIT_MISSING
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
