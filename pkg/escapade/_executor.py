import asyncio
import functools
from concurrent.futures import ThreadPoolExecutor

__all__ = [
    'AsyncExecutor',
]


class AsyncExecutor:
    """
    Event loop of the application with a thread pool for the blocking
    computations: model queries, polytope searches and experiment cells.
    """

    def __init__(self, max_workers: int = None):
        self.loop = asyncio.new_event_loop()
        self.pool = ThreadPoolExecutor(
            max_workers=max_workers, thread_name_prefix='escapade'
        )

    async def execute(self, func, *args, **kwargs):
        """Await ``func(*args, **kwargs)`` run in the pool."""
        call = functools.partial(func, *args, **kwargs)
        return await asyncio.get_running_loop().run_in_executor(
            self.pool, call
        )

    async def map(self, func, items) -> list:
        """Results of ``func`` on every item, in the order of ``items``."""
        return list(await asyncio.gather(
            *[self.execute(func, item) for item in items]
        ))

    def wraps(self, func):
        """Coroutine function running ``func`` in the pool."""
        @functools.wraps(func)
        async def wrapper(*args, **kwargs):
            return await self.execute(func, *args, **kwargs)
        return wrapper

    def shutdown(self):
        self.pool.shutdown(wait=True)
