import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest';
import { debounce } from '../src/debounce.js';

describe('debounce', () => {
  beforeEach(() => { vi.useFakeTimers(); });
  afterEach(() => { vi.useRealTimers(); });

  it('collapses a burst into one trailing call with the last arguments', () => {
    const calls: number[] = [];
    const d = debounce((n: number) => calls.push(n), 100);
    d(1);
    d(2);
    d(3);
    vi.advanceTimersByTime(99);
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(1);
    expect(calls).toEqual([3]);
    vi.advanceTimersByTime(500);
    expect(calls).toEqual([3]);
  });

  it('restarts the wait on every call', () => {
    const calls: number[] = [];
    const d = debounce((n: number) => calls.push(n), 100);
    d(1);
    vi.advanceTimersByTime(60);
    d(2);
    vi.advanceTimersByTime(60);
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(40);
    expect(calls).toEqual([2]);
  });

  it('cancel() drops the pending call', () => {
    const calls: number[] = [];
    const d = debounce((n: number) => calls.push(n), 100);
    d(1);
    d.cancel();
    vi.advanceTimersByTime(200);
    expect(calls).toEqual([]);
  });

  it('flush() runs the pending call immediately, once', () => {
    const calls: number[] = [];
    const d = debounce((n: number) => calls.push(n), 100);
    d(7);
    d.flush();
    expect(calls).toEqual([7]);
    vi.advanceTimersByTime(200);
    expect(calls).toEqual([7]);
    d.flush(); // nothing pending — no effect
    expect(calls).toEqual([7]);
  });
});
