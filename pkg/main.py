import sys
import time

from nodalparity.utils.logger import get_logger

logger = get_logger(__name__)

start_time = time.time()
logger.info(f"🚀 Initializing nodal-parity | argv: {sys.argv[1:]}")

from nodalparity.cli import main

exit_code = main()

logger.info(f"Total time taken: {time.time() - start_time:.2f} seconds (exit code {exit_code})")
sys.exit(exit_code)
