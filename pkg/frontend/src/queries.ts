// Live query loop: debounce edits, fan out to the analysis endpoints, and
// keep only responses that still match the document revision they were asked
// about.  Verdicts shown anywhere in the UI come exclusively from the
// payloads stored here — the client never classifies a path itself.

import {
  AdjustmentCheckPayload,
  AdjustmentSetsPayload,
  ApiError,
  Client,
  DsepPayload,
  IvCheckPayload,
  PathsPayload,
  TransportPayload,
} from './api.js';
import { debounce, Debounced } from './debounce.js';
import { Workspace } from './document.js';

export interface TransportSlot {
  selection: string;
  payload: TransportPayload | null;
  error: ApiError | null;
}

export interface ResultStore {
  dsep: DsepPayload | null;
  paths: PathsPayload | null;
  check: AdjustmentCheckPayload | null;
  sets: AdjustmentSetsPayload | null;
  iv: IvCheckPayload | null;
  transport: TransportSlot[];
}

export type ResultKey = keyof ResultStore;

function emptyResults(): ResultStore {
  return { dsep: null, paths: null, check: null, sets: null, iv: null, transport: [] };
}

function asApiError(err: unknown): ApiError {
  if (err instanceof ApiError) return err;
  return new ApiError(0, 'NETWORK', err instanceof Error ? err.message : String(err));
}

export const DEFAULT_DEBOUNCE_MS = 250;

export class QueryController {
  results: ResultStore = emptyResults();
  errors: Partial<Record<Exclude<ResultKey, 'transport'>, ApiError>> = {};
  onUpdate: ((key: ResultKey) => void) | null = null;
  private readonly debounced: Debounced<[]>;

  constructor(
    private readonly ws: Workspace,
    private readonly client: Client,
    wait: number = DEFAULT_DEBOUNCE_MS,
  ) {
    this.debounced = debounce(() => void this.refreshNow(), wait);
  }

  /** Request a refresh soon; bursts of edits collapse into one round. */
  schedule() {
    this.debounced();
  }

  cancel() {
    this.debounced.cancel();
  }

  /** Issue every applicable query for the current document and panel state.
   * Each response lands only if the document revision is unchanged. */
  async refreshNow(): Promise<void> {
    const ws = this.ws;
    if (!ws.graph) return;
    const rev = ws.revision;
    const dag = ws.canonical;
    const q = ws.query;
    const adjusted = [...q.adjusted].sort();
    const through = [...q.through].sort();
    const jobs: Promise<void>[] = [];

    const take = <K extends Exclude<ResultKey, 'transport'>>(
      key: K,
      promise: Promise<ResultStore[K]>,
    ) => {
      jobs.push(promise.then(
        (payload) => {
          if (ws.revision !== rev) return; // stale response — discard
          this.results[key] = payload;
          delete this.errors[key];
          this.onUpdate?.(key);
        },
        (err) => {
          if (ws.revision !== rev) return;
          this.results[key] = null;
          this.errors[key] = asApiError(err);
          this.onUpdate?.(key);
        },
      ));
    };

    const pairReady =
      q.exposure !== null && q.outcome !== null && q.exposure !== q.outcome;
    if (pairReady) {
      const exposure = q.exposure as string;
      const outcome = q.outcome as string;
      take('dsep', this.client.dsep({ dag, a: exposure, b: outcome, given: adjusted }));
      take('paths', this.client.paths({ dag, from: exposure, to: outcome, adjust: adjusted }));
      take('check', this.client.adjustmentCheck({ dag, exposure, outcome, through, set: adjusted }));
      take('sets', this.client.adjustmentSets({ dag, exposure, outcome, through }));
      if (q.candidate !== null && q.candidate !== exposure && q.candidate !== outcome) {
        take('iv', this.client.ivCheck({
          dag, candidate: q.candidate, exposure, outcome, set: adjusted,
        }));
      } else {
        this.results.iv = null;
        delete this.errors.iv;
        this.onUpdate?.('iv');
      }
    } else {
      for (const key of ['dsep', 'paths', 'check', 'sets', 'iv'] as const) {
        this.results[key] = null;
        delete this.errors[key];
      }
      this.onUpdate?.('dsep');
    }

    if (q.outcome !== null) {
      const outcome = q.outcome;
      const selections = ws.selectionNodes().filter((s) => s !== outcome);
      const slots: TransportSlot[] = selections.map((selection) => ({
        selection, payload: null, error: null,
      }));
      const fills = slots.map((slot) => {
        // The advisory asks about the selection node itself, so it cannot
        // appear in its own conditioning set; nor can the outcome.
        const given = adjusted.filter((n) => n !== slot.selection && n !== outcome);
        return this.client.transport({ dag, selection: slot.selection, outcome, given })
          .then(
            (payload) => { slot.payload = payload; },
            (err) => { slot.error = asApiError(err); },
          );
      });
      jobs.push(Promise.allSettled(fills).then(() => {
        if (ws.revision !== rev) return; // stale — discard the whole batch
        this.results.transport = slots;
        this.onUpdate?.('transport');
      }));
    } else {
      this.results.transport = [];
    }

    await Promise.allSettled(jobs);
  }
}
