export interface Debounced<A extends unknown[]> {
  (...args: A): void;
  cancel(): void;
  /** Run the pending call immediately, if any. */
  flush(): void;
}

/**
 * Trailing-edge debounce: the wrapped function runs once, `wait` ms after the
 * last call in a burst, with that call's arguments.
 */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  wait: number,
): Debounced<A> {
  let timer: ReturnType<typeof setTimeout> | null = null;
  let pending: A | null = null;

  const fire = () => {
    timer = null;
    if (!pending) return;
    const args = pending;
    pending = null;
    fn(...args);
  };

  const wrapper = (...args: A) => {
    pending = args;
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(fire, wait);
  };
  wrapper.cancel = () => {
    if (timer !== null) clearTimeout(timer);
    timer = null;
    pending = null;
  };
  wrapper.flush = fire;
  return wrapper;
}
