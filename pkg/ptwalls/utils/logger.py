import datetime
import logging
import sys
import time

initialized_logger = {}


def get_root_logger(logger_name='ptwalls', log_level=logging.INFO, log_file=None):
    """Get the root logger.

    The logger will be initialized if it has not been initialized. By default a
    StreamHandler on stderr is added. If `log_file` is specified, a FileHandler
    will also be added.

    Args:
        logger_name (str): root logger name. Default: 'ptwalls'.
        log_level (int): The root logger level. Default: logging.INFO.
        log_file (str | None): The log filename. If specified, a FileHandler
            will be added to the root logger.

    Returns:
        logging.Logger: The root logger.
    """
    logger = logging.getLogger(logger_name)
    # if the logger has been initialized, just return it
    if logger_name in initialized_logger:
        if log_file is not None and log_file not in initialized_logger[logger_name]:
            _add_file_handler(logger, log_file, log_level)
            initialized_logger[logger_name].add(log_file)
        return logger

    format_str = '%(asctime)s %(levelname)s: %(message)s'
    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setFormatter(logging.Formatter(format_str))
    logger.addHandler(stream_handler)
    logger.propagate = False
    logger.setLevel(log_level)
    files = set()
    if log_file is not None:
        _add_file_handler(logger, log_file, log_level)
        files.add(log_file)
    initialized_logger[logger_name] = files
    return logger


def _add_file_handler(logger, log_file, log_level):
    file_handler = logging.FileHandler(log_file, 'w')
    file_handler.setFormatter(logging.Formatter('%(asctime)s %(levelname)s: %(message)s'))
    file_handler.setLevel(log_level)
    logger.addHandler(file_handler)


def get_time_str():
    return time.strftime('%Y%m%d_%H%M%S', time.localtime())


def get_env_info():
    """Get environment information.

    Currently, only log the software version.
    """
    import omegaconf
    import sympy

    from ptwalls.version import __version__
    msg = ('\nVersion Information: '
           f'\n\tptwalls: {__version__}'
           f'\n\tsympy: {sympy.__version__}'
           f'\n\tomegaconf: {omegaconf.__version__}'
           f'\n\tstarted: {datetime.datetime.now().isoformat(timespec="seconds")}')
    return msg
