// Shared test plumbing: recorded-response replay, a controllable gate for
// proving that verdicts only move when service bytes arrive, and small
// stand-ins for browser facilities.

import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';
import type { FetchLike, FetchResponseLike } from '../src/api.js';

const HERE = dirname(fileURLToPath(import.meta.url));
export const REPO_ROOT = join(HERE, '..', '..');

export interface RecordedExchange {
  endpoint: string;
  body: unknown;
  status: number;
  response: unknown;
}

let recordedCache: RecordedExchange[] | null = null;

export function loadRecorded(): RecordedExchange[] {
  if (recordedCache === null) {
    const raw = readFileSync(join(HERE, 'fixtures', 'recorded.json'), 'utf8');
    recordedCache = JSON.parse(raw) as RecordedExchange[];
  }
  return recordedCache;
}

/** JSON with object keys sorted at every level, so a body built by the app
 *  and the same body recorded from Python key on identical strings. */
export function stableStringify(value: unknown): string {
  if (Array.isArray(value)) {
    return '[' + value.map(stableStringify).join(',') + ']';
  }
  if (value !== null && typeof value === 'object') {
    const entries = Object.entries(value as Record<string, unknown>)
      .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
      .map(([k, v]) => JSON.stringify(k) + ':' + stableStringify(v));
    return '{' + entries.join(',') + '}';
  }
  return JSON.stringify(value);
}

export interface InterceptedCall {
  endpoint: string;
  body: unknown;
  status: number;
  response: unknown;
}

/**
 * A fetch that can only answer requests previously recorded against the real
 * service.  Anything else throws, which is the point: a test that passes under
 * ReplayFetch has displayed nothing the service did not say.
 */
export class ReplayFetch {
  private table = new Map<string, RecordedExchange>();
  calls: InterceptedCall[] = [];

  constructor(records: RecordedExchange[] = loadRecorded()) {
    for (const rec of records) {
      this.table.set(rec.endpoint + ' ' + stableStringify(rec.body), rec);
    }
  }

  fetch: FetchLike = async (url, init) => {
    const body = JSON.parse(init.body);
    const key = url + ' ' + stableStringify(body);
    const rec = this.table.get(key);
    if (!rec) {
      throw new Error('no recorded response for ' + key);
    }
    const response = JSON.parse(JSON.stringify(rec.response));
    this.calls.push({ endpoint: url, body, status: rec.status, response });
    const result: FetchResponseLike = {
      status: rec.status,
      json: async () => response,
    };
    return result;
  };

  callsTo(endpoint: string): InterceptedCall[] {
    return this.calls.filter((c) => c.endpoint === endpoint);
  }

  lastCall(endpoint: string): InterceptedCall | null {
    const hits = this.callsTo(endpoint);
    return hits.length > 0 ? hits[hits.length - 1] : null;
  }
}

/**
 * Wraps a fetch so responses can be held back.  While closed, requests are
 * accepted but their promises stay pending; release() lets them through.
 * Used to show a verdict cannot change before the service's bytes land.
 */
export class GatedFetch {
  private waiting: Array<() => void> = [];
  private closed = false;

  constructor(private inner: FetchLike) {}

  fetch: FetchLike = async (url, init) => {
    if (this.closed) {
      await new Promise<void>((resolve) => this.waiting.push(resolve));
    }
    return this.inner(url, init);
  };

  close() {
    this.closed = true;
  }

  release() {
    this.closed = false;
    const pending = this.waiting;
    this.waiting = [];
    for (const resolve of pending) resolve();
  }

  get pendingCount(): number {
    return this.waiting.length;
  }
}

/** Let queued promise callbacks run down. */
export async function flush(turns = 20): Promise<void> {
  for (let i = 0; i < turns; i++) {
    await Promise.resolve();
  }
}

export function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

/** localStorage-shaped in-memory store. */
export class MemoryStorage {
  private data = new Map<string, string>();

  getItem(key: string): string | null {
    return this.data.has(key) ? this.data.get(key)! : null;
  }

  setItem(key: string, value: string) {
    this.data.set(key, value);
  }

  removeItem(key: string) {
    this.data.delete(key);
  }
}

export function fixtureFileText(name: string): string {
  return readFileSync(join(REPO_ROOT, 'fixtures', name + '.dag'), 'utf8');
}
