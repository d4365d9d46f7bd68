// Browser-local autosave of the current document and query panel — the only
// storage the workbench uses.

import { Workspace } from './document.js';

const KEY = 'dsepkit.workspace';

export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

interface Saved {
  text: string;
  exposure: string | null;
  outcome: string | null;
  candidate: string | null;
  adjusted: string[];
  through: string[];
}

export function saveWorkspace(store: StorageLike, ws: Workspace) {
  if (!ws.canonical) return;
  const saved: Saved = {
    text: ws.exportText(),
    exposure: ws.query.exposure,
    outcome: ws.query.outcome,
    candidate: ws.query.candidate,
    adjusted: [...ws.query.adjusted].sort(),
    through: [...ws.query.through].sort(),
  };
  store.setItem(KEY, JSON.stringify(saved));
}

export function loadSaved(store: StorageLike): Saved | null {
  const raw = store.getItem(KEY);
  if (!raw) return null;
  try {
    const parsed = JSON.parse(raw) as Saved;
    return typeof parsed.text === 'string' ? parsed : null;
  } catch {
    return null;
  }
}

/** Restore a saved session: parse the text, then re-apply the panel state. */
export async function restoreWorkspace(store: StorageLike, ws: Workspace):
    Promise<boolean> {
  const saved = loadSaved(store);
  if (!saved) return false;
  const ok = await ws.loadText(saved.text);
  if (!ok) return false;
  const names = new Set(ws.nodeNames());
  ws.query.exposure = saved.exposure !== null && names.has(saved.exposure) ? saved.exposure : null;
  ws.query.outcome = saved.outcome !== null && names.has(saved.outcome) ? saved.outcome : null;
  ws.query.candidate = saved.candidate !== null && names.has(saved.candidate) ? saved.candidate : null;
  ws.query.adjusted = new Set(saved.adjusted.filter((n) => names.has(n)));
  ws.query.through = new Set(saved.through.filter((n) => names.has(n)));
  ws.revision += 1;
  return true;
}
