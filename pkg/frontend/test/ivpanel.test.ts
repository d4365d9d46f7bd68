import { describe, expect, it } from 'vitest';
import { ApiError, ErrorEnvelope, IvCheckPayload } from '../src/api.js';
import {
  ivBadges,
  modifiedWitnesses,
  originalWitnesses,
  rejectedChips,
  removedEdges,
} from '../src/ivpanel.js';
import { loadRecorded } from './helpers.js';

function recordedIv(set: string[]): { status: number; response: unknown } {
  const rec = loadRecorded().find((r) =>
    r.endpoint === '/api/v1/iv/check' &&
    JSON.stringify((r.body as { set: string[] }).set) === JSON.stringify(set));
  if (!rec) throw new Error(`no recorded /iv/check for set=${set}`);
  return rec;
}

describe('instrument badges', () => {
  it('spells out each condition for the empty adjustment set', () => {
    const p = recordedIv([]).response as IvCheckPayload;
    expect(ivBadges(p)).toEqual([
      { label: 'relevance', ok: true, text: 'pass' },
      { label: 'connected in original', ok: true, text: 'pass' },
      { label: 'exclusion / independence', ok: false, text: 'fail' },
    ]);
    expect(p.valid).toBe(false);
  });

  it('goes all-pass for the recorded valid conditioning set', () => {
    const p = recordedIv(['C1', 'C2']).response as IvCheckPayload;
    expect(ivBadges(p).every((b) => b.ok && b.text === 'pass')).toBe(true);
    expect(p.valid).toBe(true);
  });
});

describe('witness paths and surgery', () => {
  it('renders pane-B witnesses straight from modified_open_paths', () => {
    const p = recordedIv([]).response as IvCheckPayload;
    expect(modifiedWitnesses(p)).toEqual([
      'Z -> C2 -> M -> O',
      'Z <- U1 -> E -> S <- C1 -> O',
    ]);
    expect(removedEdges(p)).toEqual([{ tail: 'E', head: 'M' }]);
  });

  it('renders pane-A witnesses straight from original_open_paths', () => {
    const p = recordedIv(['C1', 'C2']).response as IvCheckPayload;
    expect(originalWitnesses(p)).toEqual(['Z <- U1 -> E -> M -> O']);
    expect(modifiedWitnesses(p)).toEqual([]);
  });
});

describe('rejectedChips', () => {
  function mediatorError(): ApiError {
    const rec = recordedIv(['M']);
    expect(rec.status).toBe(422);
    const envelope = rec.response as ErrorEnvelope;
    return new ApiError(rec.status, envelope.error.code, envelope.error.message);
  }

  it('flags exactly the chips the refusal names', () => {
    const err = mediatorError();
    expect(err.code).toBe('MEDIATOR_IN_SET');
    expect(rejectedChips(err, ['M'])).toEqual(['M']);
    expect(rejectedChips(err, ['C1', 'M'])).toEqual(['M']);
    expect(rejectedChips(err, ['C1'])).toEqual([]);
  });

  it('ignores other errors and the no-error case', () => {
    expect(rejectedChips(null, ['M'])).toEqual([]);
    expect(rejectedChips(new ApiError(400, 'E_SYNTAX', 'M is fine'), ['M'])).toEqual([]);
  });
});
