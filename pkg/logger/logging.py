import logging
import sys

DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s"

_configured = False


def setup_logger(level=None, format_string=DEFAULT_FORMAT, force=False):
    global _configured
    if _configured and not force:
        return

    if level is None:
        from config import cfg

        level = cfg.log_level

    logging.basicConfig(
        level=level,
        format=format_string,
        stream=sys.stdout,
        force=force,
    )

    # SciPy 的 IntegrationWarning / ODE 警告统一走 logging
    logging.captureWarnings(True)
    if logging.getLogger().getEffectiveLevel() > logging.DEBUG:
        logging.getLogger("py.warnings").setLevel(logging.WARNING)
    else:
        logging.getLogger("py.warnings").setLevel(logging.NOTSET)

    _configured = True
