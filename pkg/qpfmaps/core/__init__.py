from .config import load_config, parse_config, RunConfig
