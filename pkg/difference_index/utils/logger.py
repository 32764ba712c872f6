import logging
import sys


def get_logger(name: str, level: int | str = logging.INFO) -> logging.Logger:
	"""
	Configures and returns a logger writing to stderr.
	"""
	logger = logging.getLogger(name)
	logger.setLevel(level)

	formatter = logging.Formatter(
		"%(asctime)s - %(name)s - %(levelname)s - %(message)s",
		datefmt="%Y-%m-%d %H:%M:%S",
	)

	# stdout is reserved for reports
	if not logger.handlers:
		handler = logging.StreamHandler(sys.stderr)
		handler.setFormatter(formatter)
		logger.addHandler(handler)

	for handler in logger.handlers:
		handler.setLevel(level)

	return logger
