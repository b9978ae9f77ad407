"""
╔══════════════════════════════════════════════════════════════════════════╗
║                CONFIGURACIÓN GLOBAL DEL WORKBENCH v1.0                   ║
║                                                                          ║
║  Curiosidad episódica: red de alcanzabilidad + memoria episódica        ║
║  Valores por defecto centralizados (escala de escritorio)               ║
║  Ver docs/defaults.md para la traducción desde las tablas originales    ║
╚══════════════════════════════════════════════════════════════════════════╝
"""

# ============================================================================
# NUMÉRICOS
# ============================================================================

# Adam (defaults de facto)
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPSILON = 1e-8

# Verificación de gradientes
FINITE_DIFF_EPS = 1e-5
GRADIENT_CHECK_TOLERANCE = 1e-4

# Probabilidades nunca tocan exactamente 0 ó 1
PROBABILITY_CLIP = 1e-12

# ============================================================================
# ENTORNO (LABERINTOS)
# ============================================================================

MAZE_WIDTH = 15
MAZE_HEIGHT = 15
MAZE_MIN_SIZE = 7
MAZE_TEXTURE_COUNT = 4
MAZE_LOOP_FRACTION = 0.10   # 10% de paredes internas removidas → ciclos

EPISODE_LENGTH = 500
VIEW_SIZE = 5
TEXTURE_BUCKETS = 4

GOAL_REWARD = 10.0
DENSE_OBJECT_COUNT = 8
DENSE_OBJECT_REWARD = 1.0

SPAWN_MAX_ATTEMPTS = 1000
MAZE_MAX_REGENERATIONS = 10

# ============================================================================
# RED DE ALCANZABILIDAD (R-NETWORK)
# ============================================================================

RNET_K = 5
RNET_GAP_MULTIPLIER = 2.0
RNET_PAIRS_PER_EPISODE = 200
RNET_EMBEDDING_DIM = 16
RNET_HIDDEN = 64
RNET_BATCH_SIZE = 64
RNET_LEARNING_RATE = 1e-3
RNET_EPOCHS = 20
RNET_VALIDATION_FRACTION = 0.10
RNET_DIVERGENCE_FACTOR = 10.0
RNET_DECISION_THRESHOLD = 0.5

# Protocolo offline: política aleatoria
RNET_OFFLINE_BUDGET = 100_000

# Protocolo online (ECO)
ECO_RETRAIN_EVERY = 20_000
ECO_REPLAY_SIZE = 40_000
ECO_EPOCHS = 10

# ============================================================================
# CURIOSIDAD EPISÓDICA (EC)
# ============================================================================

EC_ALPHA = 0.030
EC_BETA = 0.5
EC_NOVELTY_THRESHOLD = 0.0
EC_MEMORY_SIZE = 200
EC_AGGREGATION = "percentile"
EC_AGGREGATION_PARAM = 90

# ============================================================================
# BASELINES
# ============================================================================

# ICM
ICM_FEATURE_DIM = 16
ICM_HIDDEN = 64
ICM_FORWARD_INVERSE_RATIO = 0.96
ICM_BONUS_SCALE = 0.55
ICM_LR_MULTIPLIER = 1.0   # "curiosity loss strength" reinterpretado como multiplicador de lr
ICM_LEARNING_RATE = 1e-3
ICM_DIVERGENCE_LIMIT = 1e6

# Grid Oracle
GRID_ORACLE_CELL_SIZE = 1
GRID_ORACLE_WEIGHT = 0.052

# ============================================================================
# AGENTE PPO
# ============================================================================

PPO_LEARNING_RATE = 0.00025
PPO_ENTROPY_COEF = 0.0021
PPO_TASK_REWARD_SCALE = 1.0
PPO_DISCOUNT_GAMMA = 0.99
PPO_GAE_LAMBDA = 0.95
PPO_CLIP_EPSILON = 0.2
PPO_EPOCHS = 4
PPO_MINIBATCH_SIZE = 64
PPO_HORIZON = 256
PPO_HIDDEN = 64
PPO_VALUE_COEF = 0.5
ADVANTAGE_STD_GUARD = 1e-8

# ============================================================================
# HARNESS DE EXPERIMENTOS
# ============================================================================

TOTAL_BUDGET = 300_000
DEFAULT_SEEDS = list(range(10))
OUTPUT_DIR = "workbench_data"
FINAL_WINDOW_FRACTION = 0.10

WORKERS_ENV_VAR = "WORKBENCH_WORKERS"

METRICS_SCHEMA = "metrics/v1"
CHECKPOINT_HEADER = "# curiosity-workbench checkpoint v1"
CSV_FLOAT_FORMAT = "%.10g"

PLOT_BINS = 40

# Ablaciones (valores de fila de las tablas del suplemento)
ABLATION_THRESHOLD_K = [2, 3, 4, 5, 7, 10]
ABLATION_MEMORY_SIZE = [100, 200, 350, 500]
ABLATION_RNET_BUDGET = [5_000, 15_000, 40_000, 100_000, 200_000]
ABLATION_TV_IMAGES = [3, 10, 30]

# ============================================================================
# CONFIGURACIÓN DE LOGS
# ============================================================================

LOG_LEVEL = "INFO"
LOG_TO_FILE = False
LOG_FILE_PATH = "workbench_data/workbench.log"
LOG_EVERY_N_UPDATES = 10
