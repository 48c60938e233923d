/** Trailing-edge debounce for slider drags.
 *
 * A drag storm collapses to one call per quiet window, so request rate
 * never exceeds the solver rate. `flush` fires a pending call
 * immediately (used on drag end); `cancel` drops it.
 */
export const SLIDER_DEBOUNCE_MS = 150;

export interface Debounced<A extends unknown[]> {
  (...args: A): void;
  flush(): void;
  cancel(): void;
}

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number = SLIDER_DEBOUNCE_MS,
): Debounced<A> {
  let timer: ReturnType<typeof setTimeout> | undefined;
  let pending: A | undefined;

  const wrapped = (...args: A): void => {
    pending = args;
    if (timer !== undefined) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = undefined;
      const args2 = pending!;
      pending = undefined;
      fn(...args2);
    }, waitMs);
  };
  wrapped.flush = (): void => {
    if (timer === undefined) return;
    clearTimeout(timer);
    timer = undefined;
    const args = pending!;
    pending = undefined;
    fn(...args);
  };
  wrapped.cancel = (): void => {
    if (timer !== undefined) clearTimeout(timer);
    timer = undefined;
    pending = undefined;
  };
  return wrapped;
}
