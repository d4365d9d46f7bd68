import { describe, expect, it } from 'vitest';
import { ApiError, Client, FetchLike } from '../src/api.js';
import { ReplayFetch } from './helpers.js';
import { fixtureByName } from '../src/fixtures.js';

describe('Client', () => {
  it('POSTs JSON with the right path, headers and body', async () => {
    let seenUrl = '';
    let seenInit: { method: string; headers: Record<string, string>; body: string } | null = null;
    const fake: FetchLike = async (url, init) => {
      seenUrl = url;
      seenInit = init;
      return { status: 200, json: async () => ({ ok: true }) };
    };
    const client = new Client('http://svc:8000', fake);
    await client.dsep({ dag: 'dag {\n}\n', a: 'A', b: 'B', given: ['C'] });
    expect(seenUrl).toBe('http://svc:8000/api/v1/dsep');
    expect(seenInit!.method).toBe('POST');
    expect(seenInit!.headers['Content-Type']).toBe('application/json');
    expect(JSON.parse(seenInit!.body)).toEqual(
      { dag: 'dag {\n}\n', a: 'A', b: 'B', given: ['C'] });
  });

  it('returns the parsed payload for a recorded success', async () => {
    const replay = new ReplayFetch();
    const client = new Client('', replay.fetch);
    const fig1a = fixtureByName('fig1a')!;
    const payload = await client.parse(fig1a.dsl);
    expect(payload.nodes.map((n) => n.name)).toEqual(
      ['Height', 'Nutrition', 'PlaysBasketball', 'Sex']);
    expect(payload.edges).toHaveLength(3);
    expect(payload.dsl).toBe(fig1a.dsl);
    expect(payload.warnings).toEqual([]);
  });

  it('maps a 400 error envelope onto ApiError with diagnostics', async () => {
    const client = new Client('', new ReplayFetch().fetch);
    const err = await client.parse('dag { A -> }').catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(400);
    expect(err.code).toBe('E_SYNTAX');
    expect(err.message).toContain("expected a node name after '->'");
    expect(err.diagnostics).toHaveLength(1);
    expect(err.diagnostics[0]).toMatchObject(
      { line: 1, column: 12, severity: 'error', code: 'E_SYNTAX' });
  });

  it('maps a 422 analytic refusal onto ApiError without diagnostics', async () => {
    const client = new Client('', new ReplayFetch().fetch);
    const fig2a = fixtureByName('fig2a')!;
    const err = await client
      .ivCheck({ dag: fig2a.dsl, candidate: 'Z', exposure: 'E', outcome: 'O', set: ['M'] })
      .catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(422);
    expect(err.code).toBe('MEDIATOR_IN_SET');
    expect(err.message).toContain('M');
    expect(err.diagnostics).toEqual([]);
  });

  it('wraps a non-envelope failure in a generic ApiError', async () => {
    const fake: FetchLike = async () => ({
      status: 502,
      json: async () => { throw new Error('not json'); },
    });
    const client = new Client('', fake);
    const err = await client.parse('dag {\n}\n').catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(502);
    expect(err.code).toBe('ERROR');
  });
});
