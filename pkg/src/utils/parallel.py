#!/usr/bin/env python3
"""
并行执行工具
线程池数据并行，结果按输入下标合并，保证输出与工作线程数无关
"""

import concurrent.futures
import logging
import time
from typing import Callable, List, Optional, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


def parallel_map(
    fn: Callable[[T], R],
    items: Sequence[T],
    max_workers: Optional[int] = None,
    label: str = "tasks",
) -> List[R]:
    """
    并行计算 fn(item)，按下标返回结果

    numpy/LAPACK 在计算时释放 GIL，因此线程池即可获得真实并行度。
    任一任务抛出异常时，取消尚未开始的任务并原样抛出。

    Args:
        fn: 纯函数，不能依赖共享可变状态
        items: 输入序列
        max_workers: 最大工作线程数；None 表示自动，1 表示串行
        label: 日志中的任务名称

    Returns:
        与 items 等长、顺序一致的结果列表
    """
    total = len(items)
    if total == 0:
        return []

    start_time = time.time()
    if max_workers == 1 or total == 1:
        results = [fn(item) for item in items]
        logger.debug(f"{label}: {total} item(s) done serially in {time.time() - start_time:.2f}s")
        return results

    results: List[Optional[R]] = [None] * total
    completed = 0
    report_every = max(1, total // 10)

    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as executor:
        future_to_index = {executor.submit(fn, item): idx for idx, item in enumerate(items)}
        try:
            for future in concurrent.futures.as_completed(future_to_index):
                idx = future_to_index[future]
                results[idx] = future.result()
                completed += 1
                if completed % report_every == 0 or completed == total:
                    logger.debug(f"{label}: {completed}/{total} done")
        except Exception:
            for future in future_to_index:
                future.cancel()
            raise

    logger.info(f"{label}: {total} item(s) finished in {time.time() - start_time:.2f}s")
    return results  # type: ignore[return-value]
