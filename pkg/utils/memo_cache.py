import logging
from collections import OrderedDict

logger = logging.getLogger(__name__)

DEFAULT_MAXSIZE = 100_000


class CanonicalMemo:
    """
    Bounded memo table keyed by canonical codes.

    Values stored under a code depend only on the isomorphism class, so
    concurrent writers always store the same value and the last write wins.
    Once maxsize entries are held, the least recently used one is evicted.
    """

    def __init__(self, name, maxsize=DEFAULT_MAXSIZE):
        """
        Initialize the CanonicalMemo class.

        Args:
            name (str): Label used in log messages
            maxsize (int): Entry limit, at least 1
        """
        if maxsize < 1:
            raise ValueError(f"maxsize must be at least 1, got {maxsize}")
        self.name = name
        self.maxsize = maxsize
        self._table = OrderedDict()
        self.hits = 0
        self.misses = 0
        self.evictions = 0

    def get(self, code, default=None):
        if code in self._table:
            self.hits += 1
            self._table.move_to_end(code)
            return self._table[code]
        self.misses += 1
        return default

    def __contains__(self, code):
        return code in self._table

    def put(self, code, value):
        self._table[code] = value
        self._table.move_to_end(code)
        if len(self._table) > self.maxsize:
            self._table.popitem(last=False)
            self.evictions += 1
            if self.evictions == 1:
                logger.debug("Memo %s reached %d entries, evicting", self.name, self.maxsize)
        return value

    def __len__(self):
        return len(self._table)

    def clear(self):
        logger.debug("Clearing memo %s (%d entries)", self.name, len(self._table))
        self._table.clear()
        self.hits = 0
        self.misses = 0
        self.evictions = 0
