import logging
import os
from logging.handlers import RotatingFileHandler

from dotenv import find_dotenv, load_dotenv


def load_settings():
    """Read `.env` from the working directory into the environment; set variables win."""
    load_dotenv(find_dotenv(usecwd=True))


load_settings()


def setup_logging():
    # File logging is opt-in
    log_dir = os.getenv('CDS_LOG_DIR')
    console_level = os.getenv('CDS_LOG_LEVEL', 'WARNING').upper()

    # Set up formatters
    file_formatter = logging.Formatter(
        '%(asctime)s - %(name)-30s - %(levelname)-5s - %(filename)-25s:%(lineno)-5d - %(message)s'
    )
    console_formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(filename)s - %(message)s'
    )

    # Set up root logger
    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG)  # Set to DEBUG to capture all levels

    # Only add handlers if they don't already exist
    if not root_logger.handlers:
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
            # Create a rotating file handler for DEBUG and above
            file_handler = RotatingFileHandler(
                f"{log_dir}/cdsbench.log", maxBytes=1048576, backupCount=5
            )
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(file_formatter)
            root_logger.addHandler(file_handler)

        # Console handler (stderr)
        console_handler = logging.StreamHandler()
        console_handler.setLevel(getattr(logging, console_level, logging.WARNING))
        console_handler.setFormatter(console_formatter)
        root_logger.addHandler(console_handler)

    # Lark is chatty at DEBUG
    logging.getLogger('lark').setLevel(logging.WARNING)

    # Create a custom logger that inherits from root logger
    logger = logging.getLogger('cdsbench')

    return logger
