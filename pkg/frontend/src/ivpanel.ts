// View model for the instrument panel: three condition badges, the witness
// paths for each pane, and the inline rejection when the server refuses an
// adjustment chip.  All values are lifted straight from an /iv/check
// response (or its error envelope); the panes render server graphs only.

import { ApiError, EdgePayload, IvCheckPayload } from './api.js';

export interface ConditionBadge {
  label: string;
  ok: boolean;
  /** Spelled-out verdict so the badge never relies on colour alone. */
  text: 'pass' | 'fail';
}

export function ivBadges(p: IvCheckPayload): ConditionBadge[] {
  const badge = (label: string, ok: boolean): ConditionBadge =>
    ({ label, ok, text: ok ? 'pass' : 'fail' });
  return [
    badge('relevance', p.relevance_ok),
    badge('connected in original', p.connected_in_original),
    badge('exclusion / independence', p.exclusion_independence_ok),
  ];
}

/** Open candidate–outcome paths in the edge-removed graph (pane B). */
export function modifiedWitnesses(p: IvCheckPayload): string[] {
  return p.modified_open_paths.map((tokens) => tokens.join(' '));
}

/** Open candidate–outcome paths in the original graph (pane A). */
export function originalWitnesses(p: IvCheckPayload): string[] {
  return p.original_open_paths.map((tokens) => tokens.join(' '));
}

export function removedEdges(p: IvCheckPayload): EdgePayload[] {
  return p.removed_edges;
}

/**
 * When /iv/check refuses the adjustment set because it contains a mediator,
 * map the refusal onto the chips it names so the panel can flag them inline.
 */
export function rejectedChips(err: ApiError | null, chips: string[]): string[] {
  if (!err || err.code !== 'MEDIATOR_IN_SET') return [];
  return chips.filter((chip) =>
    new RegExp(`\\b${chip}\\b`).test(err.message));
}
