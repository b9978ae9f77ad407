"""
╔══════════════════════════════════════════════════════════════════════════╗
║                  CURIOSITY WORKBENCH - LÍNEA DE COMANDOS                 ║
║                                                                          ║
║  train-rnet <config>          Fase offline de la R-network              ║
║  run <config>                 Experimento completo (todas las semillas) ║
║  ablate <suite> <config>      Suite de ablación                         ║
║  plot <csv...> -o <svg>       Curvas de entrenamiento                   ║
║  replay <trayectorias>        Re-ejecuta episodios grabados             ║
║                                                                          ║
║  Exit: 0 ok · 1 fallo de replay o error inesperado · 2 WorkbenchError   ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

import argparse
import json
import sys

from config import LOG_LEVEL, LOG_TO_FILE, LOG_FILE_PATH
from core.errors import WorkbenchError
from envs.tasks import TaskConfig
from harness.experiment_config import load_config
from harness.runner import run_experiment, train_rnet_only
from harness.ablation import run_ablation, SUITES
from harness.replay import replay_trajectories, default_config_for
from analysis.plots import emit_plots
from utils.logger import WorkbenchLogger


def build_parser():
    parser = argparse.ArgumentParser(
        prog="main.py", description="Workbench de curiosidad episódica por alcanzabilidad")
    parser.add_argument("--log-level", default=LOG_LEVEL,
                        help="DEBUG, INFO, SUCCESS, WARNING o ERROR")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train-rnet", help="Entrena sólo la R-network (fase offline)")
    p.add_argument("config")

    p = sub.add_parser("run", help="Corre un experimento")
    p.add_argument("config")

    p = sub.add_parser("ablate", help="Corre una suite de ablación")
    p.add_argument("suite", help=", ".join(SUITES))
    p.add_argument("config")

    p = sub.add_parser("plot", help="Genera SVGs desde metrics.csv")
    p.add_argument("csv", nargs="+")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--metrics", default=None,
                   help="Columnas separadas por coma (por defecto: coverage,task_reward)")

    p = sub.add_parser("replay", help="Re-ejecuta un trajectories.csv")
    p.add_argument("trajectories")
    p.add_argument("--config", default=None,
                   help="Config del run (por defecto resolved_config.cfg junto al archivo)")
    return parser


def cmd_train_rnet(args, logger):
    path, log = train_rnet_only(load_config(args.config), logger=logger)
    print(path)
    print(f"validation_accuracy={log[-1]['validation_accuracy']:.4f}")
    return 0


def cmd_run(args, logger):
    result = run_experiment(load_config(args.config), logger=logger)
    print(result.metrics_path)
    print(result.summary_path)
    return 0


def cmd_ablate(args, logger):
    path, _ = run_ablation(args.suite, load_config(args.config), logger=logger)
    print(path)
    return 0


def cmd_plot(args, logger):
    metrics = None
    if args.metrics is not None:
        metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
    for path in emit_plots(args.csv, args.output, metrics=metrics, logger=logger):
        print(path)
    return 0


def cmd_replay(args, logger):
    config_path = args.config or default_config_for(args.trajectories)
    if config_path:
        config = load_config(config_path)
        task, cell_size = config.task, config.grid_cell_size
    else:
        logger.warning("Sin config: se usa la tarea por defecto")
        task, cell_size = TaskConfig(), 1

    results = replay_trajectories(args.trajectories, task, cell_size=cell_size, logger=logger)
    for r in results:
        state = "DIVERGE" if r.diverged else "ok"
        print(f"{r.method} seed={r.seed} episode={r.episode} steps={r.steps} "
              f"coverage={r.coverage} {state}")
    return 1 if any(r.diverged for r in results) else 0


COMMANDS = {
    "train-rnet": cmd_train_rnet,
    "run": cmd_run,
    "ablate": cmd_ablate,
    "plot": cmd_plot,
    "replay": cmd_replay,
}


def error_line(exc):
    """Línea de error legible por máquina"""
    return f"ERROR type={type(exc).__name__} message={json.dumps(str(exc), ensure_ascii=False)}"


def main(argv=None):
    args = build_parser().parse_args(argv)
    logger = WorkbenchLogger(level=args.log_level, log_to_file=LOG_TO_FILE,
                             log_file=LOG_FILE_PATH)
    try:
        return COMMANDS[args.command](args, logger)
    except WorkbenchError as e:
        print(error_line(e), file=sys.stderr)
        return 2
    except Exception as e:
        print(error_line(e), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
